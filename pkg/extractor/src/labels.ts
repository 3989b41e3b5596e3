import * as fs from 'fs';

/** Detector class-name map: CSV lines of `index,name`. */
export function loadClassMap(file: string): Map<number, string> {
  const map = new Map<number, string>();
  const text = fs.readFileSync(file, 'utf-8');
  text.split('\n').forEach((line, i) => {
    const trimmed = line.trim();
    if (!trimmed || trimmed.startsWith('#')) return;
    const comma = trimmed.indexOf(',');
    if (comma < 0) {
      throw new Error(`labels file line ${i + 1}: expected index,name`);
    }
    const index = parseInt(trimmed.slice(0, comma), 10);
    const name = trimmed.slice(comma + 1).trim();
    if (!Number.isInteger(index) || !name) {
      throw new Error(`labels file line ${i + 1}: expected index,name`);
    }
    map.set(index, name);
  });
  return map;
}

/** Image class labels: CSV lines of `image_id,label`. */
export function loadImageLabels(file: string): Map<string, string> {
  const map = new Map<string, string>();
  const text = fs.readFileSync(file, 'utf-8');
  text.split('\n').forEach((line, i) => {
    const trimmed = line.trim();
    if (!trimmed || trimmed.startsWith('#')) return;
    const comma = trimmed.indexOf(',');
    if (comma < 0) {
      throw new Error(`image labels line ${i + 1}: expected image_id,label`);
    }
    map.set(trimmed.slice(0, comma), trimmed.slice(comma + 1).trim());
  });
  return map;
}
