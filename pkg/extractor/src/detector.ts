import * as tf from '@tensorflow/tfjs';
import { DecodedImage } from './images';
import { loadLayersModel, modelChecksum } from './modelio';
import { DETECTOR_INPUT_SIZE, RawBox } from './types';

/**
 * Runs a pretrained detector exported as a tfjs layers model and turns
 * its outputs into raw candidate boxes in original-image pixel
 * coordinates. No suppression happens here: the downstream pipeline's
 * NMS is the single suppression authority.
 *
 * Expected model signature (decode-included export):
 *   input: [1, 416, 416, 3] RGB in [0, 1]
 *   outputs, in order:
 *     boxes      [1, N, 4] as (cx, cy, w, h), normalized to the input
 *     objectness [1, N]
 *     classProbs [1, N, C]
 *
 * The detector-native center/size boxes are converted to clamped
 * corner coordinates, and each candidate's score is
 * objectness * max class probability.
 */
export class TfjsDetector {
  private constructor(
    readonly model: tf.LayersModel,
    readonly modelPath: string,
    readonly sha256: string,
    readonly classMap: Map<number, string>,
  ) {}

  static async load(
    modelDir: string,
    classMap: Map<number, string>,
  ): Promise<TfjsDetector> {
    const model = await loadLayersModel(modelDir);
    return new TfjsDetector(model, modelDir, modelChecksum(modelDir), classMap);
  }

  detect(image: DecodedImage, confFloor: number): RawBox[] {
    const size = DETECTOR_INPUT_SIZE;
    const [boxes, objectness, classProbs] = tf.tidy(() => {
      const pixels = tf.tensor3d(image.data, [image.height, image.width, 3]);
      const resized = tf.image.resizeBilinear(pixels, [size, size]);
      const outputs = this.model.predict(resized.expandDims(0)) as tf.Tensor[];
      return outputs.map((t) => t.squeeze([0]));
    });
    const boxData = boxes.arraySync() as number[][];
    const objData = objectness.arraySync() as number[];
    const probData = classProbs.arraySync() as number[][];
    tf.dispose([boxes, objectness, classProbs]);

    const results: RawBox[] = [];
    for (let i = 0; i < boxData.length; i++) {
      const [cx, cy, w, h] = boxData[i];
      const probs = probData[i];
      let best = 0;
      for (let c = 1; c < probs.length; c++) {
        if (probs[c] > probs[best]) best = c;
      }
      const score = objData[i] * probs[best];
      if (score < confFloor) continue;
      const label = this.classMap.get(best);
      if (label === undefined) {
        throw new Error(`class index ${best} missing from the label map`);
      }
      const clamp = (v: number) => Math.min(1, Math.max(0, v));
      results.push({
        x_min: clamp(cx - w / 2) * image.width,
        y_min: clamp(cy - h / 2) * image.height,
        x_max: clamp(cx + w / 2) * image.width,
        y_max: clamp(cy + h / 2) * image.height,
        score,
        label,
      });
    }
    return results;
  }
}
