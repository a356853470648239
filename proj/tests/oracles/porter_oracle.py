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

"""Porter (1980) reference vectors from NLTK's ORIGINAL_ALGORITHM mode.

Words of one or two letters are left unchanged, as in the reference C
implementation. Rewrites tests/data/porter_vectors.tsv as
    word<TAB>stem<TAB>stem of stem
keeping the existing word list (first column).
"""
import pathlib

from nltk.stem.porter import PorterStemmer

stemmer = PorterStemmer(PorterStemmer.ORIGINAL_ALGORITHM)


def stem(word):
    return word if len(word) <= 2 else stemmer.stem(word)


def main():
    path = pathlib.Path(__file__).resolve().parent.parent / "data" / "porter_vectors.tsv"
    words = [line.split("\t")[0] for line in path.read_text().splitlines() if line]
    rows = []
    for w in words:
        s = stem(w)
        rows.append(f"{w}\t{s}\t{stem(s)}")
    path.write_text("\n".join(rows) + "\n")
    print(len(rows), "vectors;", sum(1 for r in rows if r.split("\t")[1] != r.split("\t")[2]), "not idempotent")


if __name__ == "__main__":
    main()
