from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from emoknn.data import Dataset, Emotion, EmotionClass, LabeledInstance, Split

HEADER = "ID\tTweet\tAffect Dimension\tIntensity Class"


def write_task_file(path: Path, rows, header: str = HEADER) -> Path:
    """Write a 4-column task TSV from (id, text, emotion, label_field) rows."""
    lines = [header]
    for rid, text, emotion, label_field in rows:
        lines.append(f"{rid}\t{text}\t{emotion}\t{label_field}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def make_dataset(labels, emotion=Emotion.ANGER, split=Split.MERGED, prefix="inst"):
    """An in-memory dataset with the given integer labels, ids inst-0, inst-1, ..."""
    instances = tuple(
        LabeledInstance(
            id=f"{prefix}-{i}",
            text=f"text {i}",
            emotion=emotion,
            label=EmotionClass(l) if l is not None else None,
        )
        for i, l in enumerate(labels)
    )
    return Dataset(emotion=emotion if instances else None, split=split, instances=instances)


def write_store_file(path: Path, model: str, level: str, dim: int, rows) -> Path:
    """Write an interchange file from (id, token_index, vector) rows."""
    lines = [f"#model={model} level={level} dim={dim}"]
    for rid, token_index, vec in rows:
        floats = " ".join(repr(float(v)) for v in vec)
        lines.append(f"{rid}\t{token_index}\t{floats}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_lexicon_file(path: Path, entries, header="word\tscores") -> Path:
    """Write a wide-format lexicon TSV from (word, vector) pairs."""
    lines = [header]
    for word, vec in entries:
        lines.append(word + "\t" + "\t".join(repr(float(v)) for v in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(20230817)
