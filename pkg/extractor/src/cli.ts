#!/usr/bin/env node
import * as path from 'path';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { assembleFeatures } from './assemble';
import { TfjsDetector } from './detector';
import { runExtraction, writeManifest } from './extract';
import { TfjsFeatureExtractor } from './features';
import { loadClassMap, loadImageLabels } from './labels';

async function main() {
  await yargs(hideBin(process.argv))
    .command(
      'extract',
      'Run detector and feature backbone over an image directory',
      (y) =>
        y
          .option('images', { type: 'string', demandOption: true })
          .option('det', {
            type: 'string',
            describe: 'output detections.jsonl',
          })
          .option('feat', {
            type: 'string',
            describe: 'output per-image 4096-d feature vectors (jsonl)',
          })
          .option('labels', {
            type: 'string',
            describe: 'detector class map CSV (index,name)',
          })
          .option('detector-model', { type: 'string' })
          .option('feature-model', { type: 'string' })
          .option('feature-layer', { type: 'string', default: 'fc2' })
          .option('conf-floor', { type: 'number', default: 0.1 })
          .option('manifest', { type: 'string' }),
      async (argv) => {
        let detector: TfjsDetector | undefined;
        let extractor: TfjsFeatureExtractor | undefined;
        if (argv.det !== undefined) {
          if (!argv['detector-model'] || !argv.labels) {
            throw new Error('--det requires --detector-model and --labels');
          }
          detector = await TfjsDetector.load(
            argv['detector-model'],
            loadClassMap(argv.labels),
          );
        }
        if (argv.feat !== undefined) {
          if (!argv['feature-model']) {
            throw new Error('--feat requires --feature-model');
          }
          extractor = await TfjsFeatureExtractor.load(
            argv['feature-model'],
            argv['feature-layer'],
          );
        }
        const manifest = runExtraction({
          imageDir: argv.images,
          detector,
          featureExtractor: extractor,
          detectionsOut: argv.det,
          featuresOut: argv.feat,
          confFloor: argv['conf-floor'],
        });
        const manifestPath =
          argv.manifest ?? path.join(path.dirname(argv.det ?? argv.feat ?? '.'), 'manifest.json');
        writeManifest(manifestPath, manifest);
        console.log(
          `processed ${manifest.counts.ok} images ` +
            `(${manifest.counts.failed} failed); manifest: ${manifestPath}`,
        );
      },
    )
    .command(
      'assemble',
      'Join detections + features + image labels into features.jsonl',
      (y) =>
        y
          .option('det', { type: 'string', demandOption: true })
          .option('feat', { type: 'string', demandOption: true })
          .option('image-labels', { type: 'string', demandOption: true })
          .option('out', { type: 'string', demandOption: true }),
      async (argv) => {
        const result = assembleFeatures(
          argv.det,
          argv.feat,
          loadImageLabels(argv['image-labels']),
          argv.out,
        );
        for (const skip of result.skipped) {
          console.error(`skipped ${skip}`);
        }
        console.log(`wrote ${result.written} records to ${argv.out}`);
      },
    )
    .demandCommand(1)
    .strict()
    .fail((msg, err) => {
      console.error(msg ?? err?.message ?? 'unknown error');
      process.exit(err && !msg ? 1 : 2);
    })
    .parseAsync();
}

main();
