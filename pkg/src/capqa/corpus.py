"""Caption corpus loading and iteration.

Input is COCO-captions style JSON: an `annotations` array of
{"image_id", "caption"} objects, optionally accompanied by an `images`
array carrying {"id", "width", "height"}. Records are grouped per image
and always iterated in ascending image_id order so downstream output is
reproducible regardless of annotation order on disk.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import EmptyCorpus, MalformedInput

log = logging.getLogger(__name__)


@dataclass
class CaptionRecord:
    image_id: int
    captions: list[str]
    width: Optional[int] = None
    height: Optional[int] = None


@dataclass
class Corpus:
    records: list[CaptionRecord] = field(default_factory=list)
    source_path: str = ""

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[CaptionRecord]:
        return iter(self.records)


def load_coco(path) -> Corpus:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read caption file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"caption file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("annotations"), list):
        raise MalformedInput(f"caption file {path} lacks an 'annotations' array")

    dims = {}
    for img in doc.get("images") or []:
        if isinstance(img, dict) and isinstance(img.get("id"), int):
            dims[img["id"]] = (img.get("width"), img.get("height"))

    grouped: dict[int, list[str]] = {}
    dropped = 0
    for ann in doc["annotations"]:
        if not isinstance(ann, dict):
            dropped += 1
            continue
        image_id = ann.get("image_id")
        caption = ann.get("caption")
        if not isinstance(image_id, int) or not isinstance(caption, str):
            dropped += 1
            continue
        if not caption.strip():
            dropped += 1
            continue
        grouped.setdefault(image_id, []).append(caption)
    if dropped:
        log.info("dropped %d blank or malformed annotations from %s", dropped, path)

    records = []
    for image_id in sorted(grouped):
        width, height = dims.get(image_id, (None, None))
        records.append(
            CaptionRecord(
                image_id=image_id,
                captions=grouped[image_id],
                width=width if isinstance(width, int) else None,
                height=height if isinstance(height, int) else None,
            )
        )
    if not records:
        raise EmptyCorpus(f"no usable captions in {path}")
    return Corpus(records=records, source_path=str(path))


def iterate(corpus: Corpus) -> Iterator[CaptionRecord]:
    """Records in ascending image_id order (the stored order)."""
    yield from corpus.records


def save_coco(corpus: Corpus, path) -> None:
    annotations = []
    images = []
    ann_id = 1
    for rec in corpus.records:
        if rec.width is not None and rec.height is not None:
            images.append({"id": rec.image_id, "width": rec.width, "height": rec.height})
        for caption in rec.captions:
            annotations.append({"id": ann_id, "image_id": rec.image_id, "caption": caption})
            ann_id += 1
    doc = {"annotations": annotations}
    if images:
        doc["images"] = images
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False)
