"""Dataset types and TSV i/o for the emotion-intensity task files.

The task distributes one tab-separated file per (emotion, split) with four
columns: id, tweet text, affect dimension, and an intensity-class field whose
leading integer is the ordinal label. Test files carry ``NONE`` in place of a
label. This module parses those files into immutable datasets, merges splits,
and writes prediction files in the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from typing import Sequence

from .errors import ParseError, ValidationError


class Emotion(str, Enum):
    ANGER = "anger"
    FEAR = "fear"
    JOY = "joy"
    SADNESS = "sadness"


class Split(str, Enum):
    TRAIN = "train"
    DEV = "dev"
    TEST = "test"
    MERGED = "merged"


class EmotionClass(IntEnum):
    """One of the four ordinal intensity levels. Any other value is rejected."""

    NO_EMOTION = 0
    LOW = 1
    MODERATE = 2
    HIGH = 3


_INTENSITY_TEMPLATES = {
    EmotionClass.NO_EMOTION: "no {emotion} can be inferred",
    EmotionClass.LOW: "low amount of {emotion} can be inferred",
    EmotionClass.MODERATE: "moderate amount of {emotion} can be inferred",
    EmotionClass.HIGH: "high amount of {emotion} can be inferred",
}

HEADER = "ID\tTweet\tAffect Dimension\tIntensity Class"
NO_LABEL_FIELD = "NONE"


def intensity_description(label: EmotionClass, emotion: Emotion) -> str:
    """Canonical human-readable description of an intensity class."""
    return _INTENSITY_TEMPLATES[EmotionClass(label)].format(emotion=emotion.value)


def round_label(score: float) -> EmotionClass:
    """Round a [0, 3] score to the nearest label; exact halves round up."""
    if not 0.0 <= score <= 3.0:
        raise ValidationError(f"score {score!r} outside [0, 3]")
    return EmotionClass(int(math.floor(score + 0.5)))


@dataclass(frozen=True)
class LabeledInstance:
    """One tweet. ``label`` is None for test instances."""

    id: str
    text: str
    emotion: Emotion
    label: EmotionClass | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("instance id must be non-empty")
        if not self.text:
            raise ValidationError(f"instance {self.id!r} has empty text")


@dataclass(frozen=True)
class Dataset:
    """An ordered, immutable collection of instances for one emotion.

    Instance order is load order and is preserved everywhere; downstream
    tie-breaking depends on it. ``emotion`` is None only for empty datasets
    (an empty file carries no affect-dimension column to read it from).
    """

    emotion: Emotion | None
    split: Split
    instances: tuple[LabeledInstance, ...]

    def __post_init__(self) -> None:
        if self.instances and self.emotion is None:
            raise ValidationError("non-empty dataset requires an emotion")
        seen: set[str] = set()
        for inst in self.instances:
            if inst.emotion != self.emotion:
                raise ValidationError(
                    f"instance {inst.id!r} has emotion {inst.emotion.value!r}, "
                    f"dataset is {self.emotion.value!r}"
                )
            if inst.id in seen:
                raise ValidationError(f"duplicate instance id {inst.id!r}")
            seen.add(inst.id)

    def __len__(self) -> int:
        return len(self.instances)

    def ids(self) -> tuple[str, ...]:
        return tuple(inst.id for inst in self.instances)


def _parse_label_field(field: str, path: str, lineno: int) -> EmotionClass | None:
    field = field.strip()
    if field == NO_LABEL_FIELD:
        return None
    head = field.split(":", 1)[0].strip()
    try:
        value = int(head)
    except ValueError:
        raise ParseError(f"unparsable intensity class {field!r}", path, lineno) from None
    try:
        return EmotionClass(value)
    except ValueError:
        raise ParseError(f"intensity class {value} outside 0-3", path, lineno) from None


def parse_dataset(path: str | Path, split: Split) -> Dataset:
    """Parse one task TSV file. Line 1 is always treated as a header."""
    path = Path(path)
    split = Split(split)
    instances: list[LabeledInstance] = []
    seen_ids: set[str] = set()
    emotion: Emotion | None = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if lineno == 1:
                continue
            line = raw.rstrip("\r\n")
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(
                    f"expected 4 tab-separated columns, found {len(fields)}",
                    str(path),
                    lineno,
                )
            inst_id, text, dimension, label_field = fields
            try:
                row_emotion = Emotion(dimension.strip())
            except ValueError:
                raise ParseError(
                    f"unknown affect dimension {dimension!r}", str(path), lineno
                ) from None
            if emotion is None:
                emotion = row_emotion
            if inst_id in seen_ids:
                raise ValidationError(f"{path}:{lineno}: duplicate instance id {inst_id!r}")
            seen_ids.add(inst_id)
            label = _parse_label_field(label_field, str(path), lineno)
            try:
                instances.append(
                    LabeledInstance(id=inst_id, text=text, emotion=row_emotion, label=label)
                )
            except ValidationError as exc:
                raise ParseError(str(exc), str(path), lineno) from None
    return Dataset(emotion=emotion, split=split, instances=tuple(instances))


def merge(train: Dataset, dev: Dataset) -> Dataset:
    """Concatenate two datasets of the same emotion into a ``merged`` one.

    Order is train's instances followed by dev's. Empty inputs (which carry
    no emotion) merge with anything.
    """
    if train.emotion is not None and dev.emotion is not None and train.emotion != dev.emotion:
        raise ValidationError(
            f"cannot merge {train.emotion.value!r} with {dev.emotion.value!r}"
        )
    emotion = train.emotion if train.emotion is not None else dev.emotion
    return Dataset(emotion=emotion, split=Split.MERGED, instances=train.instances + dev.instances)


@dataclass(frozen=True)
class PredictionRecord:
    """Final prediction for one instance: raw ensemble score plus its rounding."""

    id: str
    raw_score: float
    rounded_label: EmotionClass

    def __post_init__(self) -> None:
        expected = round_label(self.raw_score)
        if self.rounded_label != expected:
            raise ValidationError(
                f"record {self.id!r}: rounded label {int(self.rounded_label)} "
                f"does not match score {self.raw_score!r} (expected {int(expected)})"
            )


def write_predictions(
    records: Sequence[PredictionRecord], template: Dataset, path: str | Path
) -> None:
    """Write a submission TSV mirroring ``template`` with labels replaced.

    Rows follow template order; each record is matched to its template
    instance by id, and the intensity field is rewritten as
    ``<label>: <canonical description>``.
    """
    by_id = {rec.id: rec for rec in records}
    if len(by_id) != len(records):
        raise ValidationError("duplicate record ids")
    template_ids = set(template.ids())
    missing = [inst.id for inst in template.instances if inst.id not in by_id]
    extra = sorted(rid for rid in by_id if rid not in template_ids)
    if missing or extra:
        raise ValidationError(
            f"records do not match template: missing ids {missing!r}, extra ids {extra!r}"
        )
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(HEADER + "\n")
        for inst in template.instances:
            rec = by_id[inst.id]
            label_field = (
                f"{int(rec.rounded_label)}: "
                f"{intensity_description(rec.rounded_label, inst.emotion)}"
            )
            fh.write(f"{inst.id}\t{inst.text}\t{inst.emotion.value}\t{label_field}\n")
