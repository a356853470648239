#!/usr/bin/env python3
#
# Copyright 2026 The abnirml Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent SplitMix64 / FNV-1a / Fisher-Yates reference.

Writes tests/data/shuffle_golden.tsv with lines
    seed<TAB>query_id<TAB>doc_id<TAB>n<TAB>first three raw outputs<TAB>permutation
where the generator is seeded with seed ^ fnv1a64(query_id NUL doc_id NUL).
"""
import pathlib

MASK = (1 << 64) - 1


def fnv1a64_fields(fields):
    h = 0xCBF29CE484222325
    for f in fields:
        for b in f.encode() + b"\0":
            h ^= b
            h = (h * 0x100000001B3) & MASK
    return h


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        return self.next() % n


def shuffle(items, rng):
    items = list(items)
    for i in range(len(items) - 1, 0, -1):
        j = rng.below(i + 1)
        items[i], items[j] = items[j], items[i]
    return items


def main():
    rows = []
    cases = [(42, "", "", 4), (42, "q1", "d1", 4), (7, "1037798", "7067032", 10),
             (0, "q", "d", 1), (123456789, "query-2", "doc/5", 25), (2**64 - 1, "a", "b", 6)]
    for seed, qid, did, n in cases:
        s = seed ^ fnv1a64_fields([qid, did]) if (qid or did) else seed
        raw = SplitMix64(s)
        first = [raw.next() for _ in range(3)]
        perm = shuffle(range(n), SplitMix64(s))
        rows.append("\t".join([str(seed), qid, did, str(n), ",".join(map(str, first)), ",".join(map(str, perm))]))
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "shuffle_golden.tsv"
    out.write_text("\n".join(rows) + "\n")
    # Plain [a, b, c, d] under seed 42, no per-sample derivation.
    print("abcd seed 42 ->", "".join(shuffle("abcd", SplitMix64(42))))


if __name__ == "__main__":
    main()
