/** Builds the small stand-in backends the tests run against.
 *
 * Real deployments point the CLI at a YOLOv3 / VGG16 export converted
 * with `tensorflowjs_converter`. These stand-ins have the same output
 * contracts (decoded center/size candidate boxes with objectness and
 * class probabilities; a 4096-wide fc2 layer) at a fraction of the
 * size, with seeded weights so every regeneration is identical.
 */
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { saveLayersModel } from '../src/modelio';

const ROOT = __dirname.includes(`${path.sep}dist${path.sep}`)
  ? path.join(__dirname, '..', '..')
  : path.join(__dirname, '..');
const OUT = path.join(ROOT, 'fixtures', 'models');

const N_BOXES = 6;
const N_CLASSES = 5;

function init(seed: number) {
  return tf.initializers.randomUniform({ minval: -0.5, maxval: 0.5, seed });
}

function buildDetector(): tf.LayersModel {
  const input = tf.input({ shape: [416, 416, 3] });
  let x = tf.layers
    .averagePooling2d({ poolSize: 32, strides: 32 })
    .apply(input) as tf.SymbolicTensor;
  x = tf.layers.flatten().apply(x) as tf.SymbolicTensor;
  const trunk = tf.layers
    .dense({ units: 32, activation: 'relu', kernelInitializer: init(1) })
    .apply(x) as tf.SymbolicTensor;

  const boxesFlat = tf.layers
    .dense({
      units: N_BOXES * 4,
      activation: 'sigmoid',
      kernelInitializer: init(2),
      name: 'boxes_flat',
    })
    .apply(trunk) as tf.SymbolicTensor;
  const boxes = tf.layers
    .reshape({ targetShape: [N_BOXES, 4], name: 'boxes' })
    .apply(boxesFlat) as tf.SymbolicTensor;

  const objectness = tf.layers
    .dense({
      units: N_BOXES,
      activation: 'sigmoid',
      kernelInitializer: init(3),
      name: 'objectness',
    })
    .apply(trunk) as tf.SymbolicTensor;

  const probsFlat = tf.layers
    .dense({
      units: N_BOXES * N_CLASSES,
      kernelInitializer: init(4),
      name: 'class_logits',
    })
    .apply(trunk) as tf.SymbolicTensor;
  const probs = tf.layers
    .softmax({ axis: -1, name: 'class_probs' })
    .apply(
      tf.layers
        .reshape({ targetShape: [N_BOXES, N_CLASSES] })
        .apply(probsFlat) as tf.SymbolicTensor,
    ) as tf.SymbolicTensor;

  return tf.model({ inputs: input, outputs: [boxes, objectness, probs] });
}

function buildBackbone(): tf.LayersModel {
  const input = tf.input({ shape: [224, 224, 3] });
  let x = tf.layers
    .averagePooling2d({ poolSize: 32, strides: 32 })
    .apply(input) as tf.SymbolicTensor;
  x = tf.layers.flatten().apply(x) as tf.SymbolicTensor;
  x = tf.layers
    .dense({
      units: 64,
      activation: 'relu',
      kernelInitializer: init(5),
      name: 'fc1',
    })
    .apply(x) as tf.SymbolicTensor;
  const fc2 = tf.layers
    .dense({
      units: 4096,
      activation: 'relu',
      kernelInitializer: init(6),
      name: 'fc2',
    })
    .apply(x) as tf.SymbolicTensor;
  const head = tf.layers
    .dense({
      units: N_CLASSES,
      activation: 'softmax',
      kernelInitializer: init(7),
      name: 'predictions',
    })
    .apply(fc2) as tf.SymbolicTensor;
  return tf.model({ inputs: input, outputs: head });
}

export async function writeStandinModels(outDir: string = OUT): Promise<string> {
  await saveLayersModel(buildDetector(), path.join(outDir, 'detector'));
  await saveLayersModel(buildBackbone(), path.join(outDir, 'backbone'));
  return outDir;
}

if (require.main === module) {
  writeStandinModels()
    .then((dir) => console.log('stand-in models written to', dir))
    .catch((err) => {
      console.error(err);
      process.exit(1);
    });
}
