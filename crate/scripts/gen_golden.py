#!/usr/bin/env python3
"""Regenerate the cl100k_base golden fixture with the reference tiktoken library.

Usage: scripts/gen_golden.py data/cl100k_base.tiktoken > crates/core/tests/fixtures/cl100k_golden.jsonl
"""
import json
import random
import sys

import tiktoken
from tiktoken.load import load_tiktoken_bpe

CL100K_SHA256 = "223921b76ee99bde995b7ff738513eef100fb51d18c93597a113bcffe865b2a7"

ALPHABET = (
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
    "     \t\n\r|^`:.,;-_'\"{}[]()!?#@$%&*+=/\\<>~"
    "éüßçñøåæ日本語中文한국어Ελληνικάкириллица🙂🚀‍️"
)

FRAGMENTS = [
    "sensor-001", "2024-01-15T00:00:00Z", "23.5", "-122.41", "    ", "\n", "|", "^",
    "``", "`123`", "Telemetry[3]:", "device_id: ", "\"temperature\": ", ", ", "{", "}",
    "[", "]", "- ", "  ", "true", "false", "null", "I'm", "they'll", "WE'VE", "don't",
    "1000000", "3.14159", "host-07", "ERROR", "request_id", "  \n  ", "\r\n", "\t\t",
]


def random_text(rng):
    mode = rng.randrange(3)
    if mode == 0:
        n = rng.randrange(0, 40)
        return "".join(rng.choice(ALPHABET) for _ in range(n))
    if mode == 1:
        n = rng.randrange(1, 12)
        return "".join(rng.choice(FRAGMENTS) for _ in range(n))
    n = rng.randrange(1, 8)
    parts = []
    for _ in range(n):
        parts.append(rng.choice(FRAGMENTS))
        parts.append("".join(rng.choice(ALPHABET) for _ in range(rng.randrange(0, 6))))
    return "".join(parts)


def main():
    path = sys.argv[1]
    ranks = load_tiktoken_bpe(path, expected_hash=CL100K_SHA256)
    pat = r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s"""
    enc = tiktoken.Encoding(name="cl100k_base", pat_str=pat, mergeable_ranks=ranks, special_tokens={})

    rng = random.Random(20240115)
    cases = ["", "|", "^", "`", "hello world", "   ", " \n ", "Telemetry[3]:\n    device_id: sensor-001|sensor-002|sensor-003\n"]
    while len(cases) < 500:
        cases.append(random_text(rng))
    for text in cases:
        ids = enc.encode_ordinary(text)
        print(json.dumps({"text": text, "count": len(ids), "ids": ids}, ensure_ascii=True))


if __name__ == "__main__":
    main()
