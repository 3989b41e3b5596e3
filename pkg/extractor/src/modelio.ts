import * as crypto from 'crypto';
import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

/**
 * File-system IO for tfjs layers models without the native tfjs-node
 * binding. Uses the standard on-disk layout: model.json with a
 * weightsManifest pointing at binary shard files.
 */

export async function saveLayersModel(
  model: tf.LayersModel,
  dir: string,
): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async (artifacts) => {
      const weightsFile = 'weights.bin';
      const manifest = [
        { paths: [weightsFile], weights: artifacts.weightSpecs ?? [] },
      ];
      const modelJson = {
        modelTopology: artifacts.modelTopology,
        format: artifacts.format,
        generatedBy: artifacts.generatedBy,
        convertedBy: null,
        weightsManifest: manifest,
      };
      fs.writeFileSync(
        path.join(dir, 'model.json'),
        JSON.stringify(modelJson),
      );
      const data = artifacts.weightData as ArrayBuffer;
      fs.writeFileSync(path.join(dir, weightsFile), Buffer.from(data));
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON',
        },
      };
    }),
  );
}

function loadHandler(dir: string): tf.io.IOHandler {
  return {
    load: async () => {
      const modelJson = JSON.parse(
        fs.readFileSync(path.join(dir, 'model.json'), 'utf-8'),
      );
      const specs: tf.io.WeightsManifestEntry[] = [];
      const buffers: Buffer[] = [];
      for (const group of modelJson.weightsManifest) {
        specs.push(...group.weights);
        for (const p of group.paths) {
          buffers.push(fs.readFileSync(path.join(dir, p)));
        }
      }
      const joined = Buffer.concat(buffers);
      return {
        modelTopology: modelJson.modelTopology,
        format: modelJson.format,
        weightSpecs: specs,
        weightData: joined.buffer.slice(
          joined.byteOffset,
          joined.byteOffset + joined.byteLength,
        ),
      };
    },
  };
}

export async function loadLayersModel(dir: string): Promise<tf.LayersModel> {
  return tf.loadLayersModel(loadHandler(dir));
}

/** SHA-256 over model.json plus every weight shard, in name order. */
export function modelChecksum(dir: string): string {
  const hash = crypto.createHash('sha256');
  const files = fs
    .readdirSync(dir)
    .filter((f) => f === 'model.json' || f.endsWith('.bin'))
    .sort();
  for (const f of files) {
    hash.update(f);
    hash.update(fs.readFileSync(path.join(dir, f)));
  }
  return hash.digest('hex');
}
