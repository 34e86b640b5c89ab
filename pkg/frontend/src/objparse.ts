/** Minimal Wavefront OBJ reader for the backend's o/v/f subset. */

export interface ObjMesh {
  name: string;
  /** xyz triples, local to this object */
  positions: Float32Array;
  /** triangle indices into positions (local, 0-based) */
  indices: Uint32Array;
}

export function parseObj(text: string): ObjMesh[] {
  const meshes: ObjMesh[] = [];
  let name: string | null = null;
  let positions: number[] = [];
  let indices: number[] = [];
  let globalBase = 0; // 1-based global index of this object's first vertex
  let globalCount = 0;

  const flush = () => {
    if (name !== null) {
      meshes.push({
        name,
        positions: new Float32Array(positions),
        indices: new Uint32Array(indices),
      });
    }
    globalBase = globalCount;
    positions = [];
    indices = [];
  };

  for (const raw of text.split("\n")) {
    const line = raw.trim();
    if (!line || line.startsWith("#")) continue;
    const parts = line.split(/\s+/);
    switch (parts[0]) {
      case "o":
        flush();
        name = parts.slice(1).join(" ");
        break;
      case "v":
        if (name === null) throw new Error("vertex before object");
        positions.push(Number(parts[1]), Number(parts[2]), Number(parts[3]));
        globalCount += 1;
        break;
      case "f": {
        if (name === null) throw new Error("face before object");
        if (parts.length !== 4) throw new Error(`expected triangles, got ${parts.length - 1} corners`);
        for (let k = 1; k <= 3; k++) {
          const idx = Number(parts[k].split("/")[0]) - 1; // to 0-based global
          const local = idx - globalBase;
          if (local < 0 || local * 3 >= positions.length) {
            throw new Error(`face index ${idx + 1} outside object "${name}"`);
          }
          indices.push(local);
        }
        break;
      }
      default:
        throw new Error(`unsupported OBJ record "${parts[0]}"`);
    }
  }
  flush();
  return meshes;
}
