/** Writes the sample images the tests run against: two valid PNGs with
 * deterministic pixels and one corrupt file. */
import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';

// works both compiled (dist/fixtures) and transpiled in place (fixtures)
const ROOT = __dirname.includes(`${path.sep}dist${path.sep}`)
  ? path.join(__dirname, '..', '..')
  : path.join(__dirname, '..');
const OUT = path.join(ROOT, 'fixtures', 'images');

function gradient(width: number, height: number, phase: number): Buffer {
  const png = new PNG({ width, height });
  for (let y = 0; y < height; y++) {
    for (let x = 0; x < width; x++) {
      const i = (y * width + x) * 4;
      png.data[i] = (x * 5 + phase) % 256;
      png.data[i + 1] = (y * 7 + phase * 2) % 256;
      png.data[i + 2] = (x + y + phase * 3) % 256;
      png.data[i + 3] = 255;
    }
  }
  return PNG.sync.write(png);
}

export function writeSampleImages(outDir: string = OUT): string {
  fs.mkdirSync(outDir, { recursive: true });
  fs.writeFileSync(path.join(outDir, 'sample_a.png'), gradient(64, 48, 11));
  fs.writeFileSync(path.join(outDir, 'sample_b.png'), gradient(32, 32, 97));
  // deliberately truncated header, must be reported as a failure
  fs.writeFileSync(
    path.join(outDir, 'corrupt.png'),
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x00]),
  );
  return outDir;
}

if (require.main === module) {
  console.log('sample images written to', writeSampleImages());
}
