#!/usr/bin/env python3
"""Synthesize a small demo dataset: captions, word vectors, and SRL frames.

Writes captions.json (COCO-style), vectors.txt (GloVe text format), and
frames.jsonl into --out-dir, sized by --images. The captions are built from
disjoint noun families so image-text-matching negatives stay controllable.
"""

import argparse
import json
import random
from pathlib import Path

from capqa.lingo import pluralize

FAMILIES = [
    ("man", "hat", "shirt"),
    ("dog", "ball", "stick"),
    ("car", "road", "wheel"),
    ("cat", "sofa", "blanket"),
    ("boat", "river", "dock"),
    ("horse", "field", "fence"),
    ("bird", "tree", "branch"),
    ("plate", "table", "fork"),
    ("phone", "desk", "lamp"),
    ("train", "station", "track"),
]
ADJECTIVES = ["red", "small", "old", "shiny", "black", "white", "large"]
VERBS = ["standing", "sitting", "resting", "waiting", "moving"]
NUMBERS = ["two", "three", "four"]
SIZES = [(640, 480), (800, 600), (1024, 768), (500, 375)]

# one caption with hand-annotated frames, attached to the first image
FRAMED_CAPTION = "A girl in a red shirt holding an apple sitting in an empty open field"


def captions_for(rng, family):
    n1, n2, n3 = family
    adj = rng.choice(ADJECTIVES)
    verb = rng.choice(VERBS)
    num = rng.choice(NUMBERS)
    return [
        f"A {adj} {n1} {verb} on the {n2}",
        f"{num.capitalize()} {pluralize(n1)} near the {n3}",
        f"There is a {n1} and a {n2}",
    ]


def span(caption, sub):
    i = caption.index(sub)
    return [i, i + len(sub)]


def demo_frames(image_id):
    c = FRAMED_CAPTION
    return [
        {
            "image_id": image_id,
            "caption_index": 0,
            "predicate": {"lemma": "hold", "span": span(c, "holding")},
            "args": [
                {"role": "AGENT", "text": "girl in a red shirt",
                 "span": span(c, "girl in a red shirt")},
                {"role": "PATIENT", "text": "an apple", "span": span(c, "an apple")},
            ],
        },
        {
            "image_id": image_id,
            "caption_index": 0,
            "predicate": {"lemma": "sit", "span": span(c, "sitting")},
            "args": [
                {"role": "AGENT", "text": "girl in a red shirt holding an apple",
                 "span": span(c, "girl in a red shirt holding an apple")},
                {"role": "LOCATION", "text": "an empty open field",
                 "span": span(c, "an empty open field")},
            ],
        },
    ]


def write_vectors(path, rng, dim=10):
    words = sorted({w for fam in FAMILIES for w in fam}
                   | set(ADJECTIVES) | {"girl", "apple", "puppy", "kitten", "truck"})
    with open(path, "w", encoding="utf-8") as fh:
        for word in words:
            vec = [rng.gauss(0.0, 1.0) for _ in range(dim)]
            norm = sum(v * v for v in vec) ** 0.5 or 1.0
            fh.write(word + " " + " ".join(f"{v / norm:.6f}" for v in vec) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="demo_data")
    ap.add_argument("--images", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    annotations, images = [], []
    for image_id in range(1, args.images + 1):
        family = FAMILIES[(image_id - 1) % len(FAMILIES)]
        caps = captions_for(rng, family)
        if image_id == 1:
            caps[0] = FRAMED_CAPTION
        width, height = rng.choice(SIZES)
        images.append({"id": image_id, "width": width, "height": height})
        for caption in caps:
            annotations.append({"image_id": image_id, "caption": caption})

    captions_path = out / "captions.json"
    captions_path.write_text(
        json.dumps({"images": images, "annotations": annotations}, indent=2),
        encoding="utf-8",
    )

    frames_path = out / "frames.jsonl"
    with open(frames_path, "w", encoding="utf-8") as fh:
        for frame in demo_frames(1):
            fh.write(json.dumps(frame) + "\n")

    vectors_path = out / "vectors.txt"
    write_vectors(vectors_path, rng)

    print(f"wrote {captions_path} ({args.images} images, {len(annotations)} captions)")
    print(f"wrote {frames_path} (2 frames)")
    print(f"wrote {vectors_path}")


if __name__ == "__main__":
    main()
