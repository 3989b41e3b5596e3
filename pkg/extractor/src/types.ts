import { z } from 'zod';

/** Axis-aligned box in original-image pixel coordinates. */
export interface RawBox {
  x_min: number;
  y_min: number;
  x_max: number;
  y_max: number;
  score: number;
  label: string;
}

export const boxSchema = z
  .object({
    x_min: z.number(),
    y_min: z.number(),
    x_max: z.number(),
    y_max: z.number(),
    score: z.number().min(0).max(1),
    label: z.string(),
  })
  .refine((b) => b.x_max >= b.x_min && b.y_max >= b.y_min, {
    message: 'box corners out of order',
  });

/** One line of detections.jsonl (the semlink ingestion schema). */
export const detectionsLineSchema = z.object({
  image_id: z.string(),
  boxes: z.array(boxSchema),
});

/** One line of the intermediate feature file. */
export const featureVectorLineSchema = z.object({
  image_id: z.string(),
  vgg: z.array(z.number().finite()).length(4096),
});

/** One line of the assembled features.jsonl. */
export const featuresLineSchema = z.object({
  image_id: z.string(),
  label: z.string(),
  entities: z.array(z.string()),
  vgg: z.array(z.number().finite()).length(4096),
});

export type DetectionsLine = z.infer<typeof detectionsLineSchema>;
export type FeatureVectorLine = z.infer<typeof featureVectorLineSchema>;
export type FeaturesLine = z.infer<typeof featuresLineSchema>;

export interface ImageStatus {
  id: string;
  status: 'ok' | 'failed';
  reason?: string;
}

export interface ExtractionManifest {
  images: ImageStatus[];
  counts: { ok: number; failed: number };
  detector?: {
    modelPath: string;
    sha256: string;
    inputSize: number;
    confFloor: number;
  };
  features?: {
    modelPath: string;
    sha256: string;
    layer: string;
    inputSize: number;
  };
}

export const FEATURE_DIM = 4096;
export const DETECTOR_INPUT_SIZE = 416;
export const FEATURE_INPUT_SIZE = 224;
