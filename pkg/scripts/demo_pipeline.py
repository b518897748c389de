#!/usr/bin/env python3
"""Run the full pipeline on the demo dataset, end to end.

Expects the files written by make_demo_data.py and drives every CLI
subcommand in order, leaving all outputs under --work-dir.
"""

import argparse
import sys
from pathlib import Path

from capqa.cli import main as capqa


def run(step, argv):
    print(f"\n== {step}: capqa {' '.join(argv)}")
    rc = capqa(argv)
    if rc != 0:
        print(f"step '{step}' failed with exit code {rc}", file=sys.stderr)
        sys.exit(rc)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default="demo_data")
    ap.add_argument("--work-dir", default="demo_out")
    ap.add_argument("--seed", default="0")
    args = ap.parse_args()

    data = Path(args.data_dir)
    work = Path(args.work_dir)
    work.mkdir(parents=True, exist_ok=True)
    captions = str(data / "captions.json")
    vectors = str(data / "vectors.txt")
    frames = str(data / "frames.jsonl")

    qa = str(work / "qa.jsonl")
    run("generate", [
        "generate", "--captions", captions, "--vectors", vectors,
        "--srl-frames", frames, "--out", qa, "--seed", args.seed,
    ])

    augmented = str(work / "qa_augmented.jsonl")
    run("augment", [
        "augment", "--in", qa, "--out", augmented,
        "--mode", "paraphrase", "--seed", args.seed,
    ])

    weighted = str(work / "qa_weighted.jsonl")
    run("weigh", ["weigh", "--in", augmented, "--out", weighted])

    run("vocab", [
        "vocab", "--in", weighted, "--out", str(work / "answers.vocab"),
    ])

    run("patches", [
        "patches", "--captions", captions, "--out", str(work / "patches.jsonl"),
    ])

    run("pretrain", [
        "pretrain", "--captions", captions, "--qa", weighted,
        "--out", str(work / "pretrain.jsonl"), "--seed", args.seed,
    ])

    run("sample-epoch", [
        "sample-epoch", "--in", weighted, "--epoch", "0",
        "--out", str(work / "epoch0.jsonl"), "--seed", args.seed,
    ])

    run("stats", ["stats", "--in", weighted])

    print(f"\nall outputs under {work}/")


if __name__ == "__main__":
    main()
