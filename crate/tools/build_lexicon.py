#!/usr/bin/env python3
"""Regenerate data/lexicon.tsv from jieba's frequency dictionary and pypinyin readings.

    pip install jieba==0.42.1 pypinyin==0.55.0
    python3 tools/build_lexicon.py > data/lexicon.tsv

Characters are limited to GB2312. Per-reading character frequencies are the
summed frequencies of the dictionary words in which pypinyin assigns that
reading to the character. Multi-character words are the most frequent
entries of the jieba dictionary, read with pypinyin's phrase-aware lookup.
"""

import collections
import os
import sys

import jieba
from pypinyin import Style, lazy_pinyin, pinyin

MAX_WORDS = 50000

INITIALS = ["zh", "ch", "sh", "b", "p", "m", "f", "d", "t", "n", "l",
            "g", "k", "h", "j", "q", "x", "r", "z", "c", "s"]
FINALS = {"a", "o", "e", "i", "u", "v", "er", "ai", "ei", "ao", "ou", "ia",
          "iao", "ie", "iu", "ua", "uo", "uai", "ui", "ve", "an", "en", "in",
          "un", "vn", "ang", "eng", "ing", "ong", "ian", "iang", "iong",
          "uan", "uang", "van", "ueng"}
Y_W = {"yi": "i", "ya": "ia", "ye": "ie", "yao": "iao", "you": "iu",
       "yan": "ian", "yin": "in", "yang": "iang", "ying": "ing",
       "yong": "iong", "yu": "v", "yue": "ve", "yuan": "van", "yun": "vn",
       "wu": "u", "wa": "ua", "wo": "uo", "wai": "uai", "wei": "ui",
       "wan": "uan", "wen": "un", "wang": "uang", "weng": "ueng"}
BARE = {"a", "o", "e", "ai", "ei", "ao", "ou", "an", "en", "ang", "eng", "er"}


def valid(syl):
    """Mirror of the Rust pinyin parser's structural rules."""
    if len(syl) < 2 or syl[-1] not in "12345":
        return False
    body = syl[:-1].replace("ü", "v")
    for ini in INITIALS:
        if body.startswith(ini) and len(body) > len(ini):
            fin = body[len(ini):]
            if ini in ("j", "q", "x"):
                return fin in ("i", "ia", "ie", "iao", "iu", "ian", "in",
                               "iang", "ing", "iong", "u", "ue", "uan", "un",
                               "v", "ve", "van", "vn")
            if fin.startswith("v"):
                return ini in ("n", "l") and fin in ("v", "ve")
            return fin in FINALS and fin != "ueng"
    return body in Y_W or body in BARE


def is_gb2312_hanzi(ch):
    if not "一" <= ch <= "鿿":
        return False
    try:
        ch.encode("gb2312")
    except UnicodeEncodeError:
        return False
    return True


def reading(text):
    return lazy_pinyin(text, style=Style.TONE3, neutral_tone_with_five=True)


def main():
    dict_path = os.path.join(os.path.dirname(jieba.__file__), "dict.txt")
    words = []
    with open(dict_path, encoding="utf-8") as f:
        for line in f:
            parts = line.split()
            if len(parts) < 2:
                continue
            word, freq = parts[0], int(parts[1])
            if freq > 0 and all(is_gb2312_hanzi(c) for c in word):
                words.append((word, freq))

    tally = collections.defaultdict(collections.Counter)
    readings = {}
    for word, freq in words:
        syls = reading(word)
        if len(syls) != len(word) or not all(valid(s) for s in syls):
            continue
        readings[word] = syls
        for ch, syl in zip(word, syls):
            tally[ch][syl] += freq

    out = sys.stdout
    out.write("# Mandarin pronunciation lexicon: word<TAB>pinyin<TAB>frequency\n")
    out.write("# Derived from jieba 0.42.1 dict.txt (MIT) and pypinyin 0.55.0 (MIT).\n")
    out.write("# Regenerate with tools/build_lexicon.py.\n")

    for ch in sorted(tally):
        counts = tally[ch]
        default = reading(ch)[0]
        if valid(default) and default not in counts:
            counts[default] = 1
        for syl, freq in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
            out.write(f"{ch}\t{syl}\t{freq}\n")

    multi = [(w, f) for w, f in words if len(w) > 1 and w in readings]
    multi.sort(key=lambda wf: (-wf[1], wf[0]))
    for word, freq in sorted(multi[:MAX_WORDS]):
        out.write(f"{word}\t{' '.join(readings[word])}\t{freq}\n")


if __name__ == "__main__":
    main()
