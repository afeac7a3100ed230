/**
 * Word/punctuation tokenizer shared by tuning and generation.
 *
 * Splits on whitespace and punctuation boundaries (identifiers and
 * numbers stay whole, every punctuation character is its own token).
 * Detokenization joins with single spaces, so the documented
 * normalization is: all inter-token whitespace collapses to one space.
 */

export const PAD = 0;
export const BOS = 1;
export const EOS = 2;
export const UNK = 3;
export const MASK = 4;
export const SPECIAL_TOKENS = ["<pad>", "<bos>", "<eos>", "<unk>", "<mask>"];

const TOKEN_RE = /\w+|[^\w\s]/g;

export function tokenize(text: string): string[] {
  return text.match(TOKEN_RE) ?? [];
}

export function detokenize(tokens: string[]): string {
  return tokens.join(" ");
}

export class Vocab {
  readonly tokenToId = new Map<string, number>();
  readonly idToToken: string[] = [];

  constructor(tokens: Iterable<string>) {
    for (const t of SPECIAL_TOKENS) this.push(t);
    const sorted = [...new Set(tokens)].sort();
    for (const t of sorted) this.push(t);
  }

  private push(token: string): void {
    if (!this.tokenToId.has(token)) {
      this.tokenToId.set(token, this.idToToken.length);
      this.idToToken.push(token);
    }
  }

  get size(): number {
    return this.idToToken.length;
  }

  encode(tokens: string[]): number[] {
    return tokens.map((t) => this.tokenToId.get(t) ?? UNK);
  }

  decode(ids: number[]): string[] {
    const out: string[] = [];
    for (const id of ids) {
      if (id === EOS) break;
      if (id === PAD || id === BOS || id === MASK) continue;
      out.push(this.idToToken[id] ?? "<unk>");
    }
    return out;
  }

  serialize(): string[] {
    return [...this.idToToken];
  }

  static deserialize(tokens: string[]): Vocab {
    const v = new Vocab([]);
    for (const t of tokens.slice(SPECIAL_TOKENS.length)) {
      v.tokenToId.set(t, v.idToToken.length);
      v.idToToken.push(t);
    }
    return v;
  }
}

/** Vocabulary over training data plus template words, deterministic order. */
export function buildVocab(texts: Iterable<string>): Vocab {
  const tokens: string[] = [];
  for (const text of texts) tokens.push(...tokenize(text));
  return new Vocab(tokens);
}
