import * as fs from 'fs';
import {
  DetectionsLine,
  FeatureVectorLine,
  FeaturesLine,
  detectionsLineSchema,
  featureVectorLineSchema,
} from './types';

export interface AssembleResult {
  written: number;
  skipped: string[];
}

function readJsonl<T>(path: string, parse: (obj: unknown) => T): Map<string, T> {
  const map = new Map<string, T>();
  const text = fs.readFileSync(path, 'utf-8');
  text.split('\n').forEach((line, i) => {
    if (!line.trim()) return;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch (err) {
      throw new Error(`${path} line ${i + 1}: malformed JSON`);
    }
    const parsed = parse(obj);
    map.set((parsed as { image_id: string }).image_id, parsed);
  });
  return map;
}

/** Deduplicated box labels ordered by each label's best score. */
export function entitiesFromBoxes(line: DetectionsLine): string[] {
  const best = new Map<string, number>();
  for (const box of line.boxes) {
    const current = best.get(box.label);
    if (current === undefined || box.score > current) {
      best.set(box.label, box.score);
    }
  }
  return [...best.entries()]
    .sort((a, b) => b[1] - a[1])
    .map(([label]) => label);
}

/**
 * Joins detections, feature vectors, and per-image class labels into
 * features.jsonl records. Image ids present in only some inputs are
 * skipped and reported. Run the pipeline's `nms` command on the
 * detections first if suppressed entity lists are wanted; this join
 * takes whatever boxes it is given.
 */
export function assembleFeatures(
  detectionsPath: string,
  featuresPath: string,
  imageLabels: Map<string, string>,
  outPath: string,
): AssembleResult {
  const detections = readJsonl(detectionsPath, (o) =>
    detectionsLineSchema.parse(o),
  );
  const vectors = readJsonl(featuresPath, (o) =>
    featureVectorLineSchema.parse(o),
  );

  const allIds = new Set<string>([
    ...detections.keys(),
    ...vectors.keys(),
    ...imageLabels.keys(),
  ]);
  const lines: string[] = [];
  const skipped: string[] = [];
  for (const id of [...allIds].sort()) {
    const det = detections.get(id);
    const vec = vectors.get(id);
    const label = imageLabels.get(id);
    if (det === undefined || vec === undefined || label === undefined) {
      const missing = [
        det === undefined ? 'detections' : null,
        vec === undefined ? 'features' : null,
        label === undefined ? 'label' : null,
      ].filter(Boolean);
      skipped.push(`${id} (missing ${missing.join(', ')})`);
      continue;
    }
    const record: FeaturesLine = {
      image_id: id,
      label,
      entities: entitiesFromBoxes(det),
      vgg: vec.vgg,
    };
    lines.push(JSON.stringify(record));
  }
  fs.writeFileSync(outPath, lines.length ? lines.join('\n') + '\n' : '');
  return { written: lines.length, skipped };
}
