/**
 * Synthetic operator-swap / off-by-one corpus for license-free
 * convergence checks. Small function-shaped statements where the fix is
 * a single-token substitution, seeded and fully deterministic.
 */

import { RepairInstance } from "./types";

export class Rng {
  private state: number;

  constructor(seed: number) {
    this.state = seed >>> 0 || 1;
  }

  next(): number {
    // xorshift32
    let x = this.state;
    x ^= x << 13;
    x >>>= 0;
    x ^= x >> 17;
    x ^= x << 5;
    x >>>= 0;
    this.state = x;
    return x / 0xffffffff;
  }

  pick<T>(items: readonly T[]): T {
    return items[Math.floor(this.next() * items.length) % items.length];
  }

  int(lo: number, hi: number): number {
    return lo + (Math.floor(this.next() * (hi - lo + 1)) % (hi - lo + 1));
  }
}

const NAMES = ["x", "y", "z", "a", "b", "c"] as const;
const SWAPS: readonly [string, string][] = [
  ["-", "+"],
  ["+", "-"],
  ["<", "<="],
  ["*", "+"],
];

export function syntheticCorpus(count: number, seed: number): RepairInstance[] {
  const rng = new Rng(seed);
  const out: RepairInstance[] = [];
  const seen = new Set<string>();
  while (out.length < count) {
    const form = rng.int(0, 2);
    const lhs = rng.pick(NAMES);
    const rhs = rng.pick(NAMES);
    const num = rng.int(0, 9);
    const [bad, good] = rng.pick(SWAPS);
    let buggy: string;
    let fixed: string;
    if (form === 0) {
      buggy = `${lhs} = ${rhs} ${bad} ${num} ;`;
      fixed = `${lhs} = ${rhs} ${good} ${num} ;`;
    } else if (form === 1) {
      buggy = `return ${lhs} ${bad} ${rhs} ;`;
      fixed = `return ${lhs} ${good} ${rhs} ;`;
    } else {
      buggy = `if ( ${lhs} ${bad} ${num} ) { ${rhs} = ${num} ; }`;
      fixed = `if ( ${lhs} ${good} ${num} ) { ${rhs} = ${num} ; }`;
    }
    const key = buggy + "|" + fixed;
    if (seen.has(key)) continue;
    seen.add(key);
    out.push({
      id: `syn-${out.length}`,
      language: "java",
      buggy,
      fixed,
      knowledge: { bug_type: "OPERATOR_SWAP" },
    });
  }
  return out;
}
