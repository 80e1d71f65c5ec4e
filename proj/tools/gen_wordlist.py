#!/usr/bin/env python3
"""Rebuilds data/wordlist.txt.

The list is the intersection of the public-domain Webster's Second word list
(shipped in the `english-words` package as web2) with the most frequent
English words from `wordfreq`. Dictionary membership keeps out acronyms that
frequency lists pick up ("etf", "nav"); the frequency cut keeps out obscure
entries.

    pip install english-words wordfreq
    python3 tools/gen_wordlist.py > data/wordlist.txt
"""
import sys

from english_words import get_english_words_set
from wordfreq import top_n_list

TOP_N = 150000


def main():
    web2 = get_english_words_set(["web2"], lower=True, alpha=True)
    words = sorted({
        w for w in top_n_list("en", TOP_N)
        if w.isascii() and w.isalpha() and len(w) > 1 and w in web2
    })
    sys.stdout.write("\n".join(words) + "\n")


if __name__ == "__main__":
    main()
