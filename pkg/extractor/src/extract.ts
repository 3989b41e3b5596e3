import * as fs from 'fs';
import { TfjsDetector } from './detector';
import { TfjsFeatureExtractor } from './features';
import { imageId, listImages, loadImage } from './images';
import {
  DETECTOR_INPUT_SIZE,
  ExtractionManifest,
  FEATURE_INPUT_SIZE,
  ImageStatus,
} from './types';

export interface ExtractOptions {
  imageDir: string;
  detector?: TfjsDetector;
  featureExtractor?: TfjsFeatureExtractor;
  detectionsOut?: string;
  featuresOut?: string;
  confFloor: number;
}

/**
 * Runs the configured backends over every image in the directory.
 * Unreadable images are recorded as failures and processing continues.
 * Output lines are sorted by image id so reruns are byte-identical.
 */
export function runExtraction(options: ExtractOptions): ExtractionManifest {
  const files = listImages(options.imageDir);
  const statuses: ImageStatus[] = [];
  const detectionLines: string[] = [];
  const featureLines: string[] = [];

  for (const file of files) {
    const id = imageId(file);
    try {
      const image = loadImage(file);
      if (options.detector) {
        const boxes = options.detector.detect(image, options.confFloor);
        detectionLines.push(JSON.stringify({ image_id: id, boxes }));
      }
      if (options.featureExtractor) {
        const vgg = options.featureExtractor.extract(image);
        featureLines.push(JSON.stringify({ image_id: id, vgg }));
      }
      statuses.push({ id, status: 'ok' });
    } catch (err) {
      statuses.push({
        id,
        status: 'failed',
        reason: err instanceof Error ? err.message : String(err),
      });
    }
  }

  if (options.detectionsOut !== undefined) {
    writeLines(options.detectionsOut, detectionLines);
  }
  if (options.featuresOut !== undefined) {
    writeLines(options.featuresOut, featureLines);
  }

  const ok = statuses.filter((s) => s.status === 'ok').length;
  const manifest: ExtractionManifest = {
    images: statuses,
    counts: { ok, failed: statuses.length - ok },
  };
  if (options.detector) {
    manifest.detector = {
      modelPath: options.detector.modelPath,
      sha256: options.detector.sha256,
      inputSize: DETECTOR_INPUT_SIZE,
      confFloor: options.confFloor,
    };
  }
  if (options.featureExtractor) {
    manifest.features = {
      modelPath: options.featureExtractor.modelPath,
      sha256: options.featureExtractor.sha256,
      layer: options.featureExtractor.layerName,
      inputSize: FEATURE_INPUT_SIZE,
    };
  }
  return manifest;
}

function writeLines(path: string, lines: string[]): void {
  fs.writeFileSync(path, lines.length ? lines.join('\n') + '\n' : '');
}

export function writeManifest(path: string, manifest: ExtractionManifest) {
  fs.writeFileSync(path, JSON.stringify(manifest, null, 2) + '\n');
}
