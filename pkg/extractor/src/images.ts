import * as fs from 'fs';
import * as path from 'path';
import { PNG } from 'pngjs';

export interface DecodedImage {
  /** RGB float32 pixels in [0, 1], height x width x 3, row-major. */
  data: Float32Array;
  width: number;
  height: number;
}

const EXTENSIONS = new Set(['.png', '.ppm']);

export function listImages(dir: string): string[] {
  return fs
    .readdirSync(dir)
    .filter((name) => EXTENSIONS.has(path.extname(name).toLowerCase()))
    .sort()
    .map((name) => path.join(dir, name));
}

export function imageId(file: string): string {
  return path.basename(file, path.extname(file));
}

export function loadImage(file: string): DecodedImage {
  const ext = path.extname(file).toLowerCase();
  const bytes = fs.readFileSync(file);
  if (ext === '.png') {
    return decodePng(bytes);
  }
  if (ext === '.ppm') {
    return decodePpm(bytes);
  }
  throw new Error(`unsupported image format: ${file}`);
}

function decodePng(bytes: Buffer): DecodedImage {
  const png = PNG.sync.read(bytes);
  const { width, height } = png;
  const data = new Float32Array(width * height * 3);
  for (let i = 0; i < width * height; i++) {
    data[i * 3] = png.data[i * 4] / 255;
    data[i * 3 + 1] = png.data[i * 4 + 1] / 255;
    data[i * 3 + 2] = png.data[i * 4 + 2] / 255;
  }
  return { data, width, height };
}

/** Binary PPM (P6), maxval 255. */
function decodePpm(bytes: Buffer): DecodedImage {
  const header: string[] = [];
  let pos = 0;
  while (header.length < 4) {
    while (pos < bytes.length && /\s/.test(String.fromCharCode(bytes[pos]))) {
      pos++;
    }
    if (String.fromCharCode(bytes[pos]) === '#') {
      while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      continue;
    }
    let token = '';
    while (pos < bytes.length && !/\s/.test(String.fromCharCode(bytes[pos]))) {
      token += String.fromCharCode(bytes[pos]);
      pos++;
    }
    header.push(token);
  }
  pos++; // single whitespace after maxval
  const [magic, w, h, maxval] = header;
  if (magic !== 'P6' || maxval !== '255') {
    throw new Error('only P6 PPM with maxval 255 is supported');
  }
  const width = parseInt(w, 10);
  const height = parseInt(h, 10);
  const expected = width * height * 3;
  if (bytes.length - pos < expected) {
    throw new Error('truncated PPM pixel data');
  }
  const data = new Float32Array(expected);
  for (let i = 0; i < expected; i++) {
    data[i] = bytes[pos + i] / 255;
  }
  return { data, width, height };
}
