import * as tf from '@tensorflow/tfjs';
import { DecodedImage } from './images';
import { loadLayersModel, modelChecksum } from './modelio';
import { FEATURE_DIM, FEATURE_INPUT_SIZE } from './types';

/**
 * Extracts the 4096-wide activations of a named fully-connected layer
 * (fc2 by default) from a pretrained backbone exported as a tfjs
 * layers model with 224x224 RGB input in [0, 1].
 */
export class TfjsFeatureExtractor {
  private constructor(
    readonly model: tf.LayersModel,
    readonly modelPath: string,
    readonly sha256: string,
    readonly layerName: string,
  ) {}

  static async load(
    modelDir: string,
    layerName = 'fc2',
  ): Promise<TfjsFeatureExtractor> {
    const full = await loadLayersModel(modelDir);
    const layer = full.getLayer(layerName);
    const truncated = tf.model({
      inputs: full.inputs,
      outputs: layer.output as tf.SymbolicTensor,
    });
    return new TfjsFeatureExtractor(
      truncated,
      modelDir,
      modelChecksum(modelDir),
      layerName,
    );
  }

  extract(image: DecodedImage): number[] {
    const size = FEATURE_INPUT_SIZE;
    const out = tf.tidy(() => {
      const pixels = tf.tensor3d(image.data, [image.height, image.width, 3]);
      const resized = tf.image.resizeBilinear(pixels, [size, size]);
      return (this.model.predict(resized.expandDims(0)) as tf.Tensor).squeeze([
        0,
      ]);
    });
    const values = Array.from(out.dataSync());
    out.dispose();
    if (values.length !== FEATURE_DIM) {
      throw new Error(
        `layer ${this.layerName} yields ${values.length} values, ` +
          `expected ${FEATURE_DIM}`,
      );
    }
    if (!values.every(Number.isFinite)) {
      throw new Error('non-finite feature value');
    }
    return values;
  }
}
