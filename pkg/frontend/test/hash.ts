import { createHash } from "node:crypto";

import { snapshotString } from "../src/snapshot.js";
import type { ViewModel } from "../src/types.js";

export function snapshotHash(vm: ViewModel): string {
  return createHash("sha256").update(snapshotString(vm)).digest("hex");
}
