"""Neighbor-trace explanations: per-member class histograms and the
cross-member intersection of chosen training instances.

A prediction is explained by showing, for each ensemble member, how many of
its k neighbors carried each class, and which training instances were picked
by several members at once (with their texts, so a human can spot the shared
vocabulary that drove the decision).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

from .ensemble import EnsemblePrediction
from .errors import ValidationError
from .knn import Neighbor


@dataclass(frozen=True)
class ClassHistogram:
    """Neighbor counts per class for one member's trace; counts sum to k."""

    model_label: str
    k: int
    counts: tuple[int, int, int, int]

    def __post_init__(self) -> None:
        if sum(self.counts) != self.k:
            raise ValidationError(
                f"histogram counts {self.counts} sum to {sum(self.counts)}, expected k={self.k}"
            )


def class_histogram(trace: Sequence[Neighbor], model_label: str = "") -> ClassHistogram:
    """Tally a trace's neighbor labels into the four classes."""
    if not trace:
        raise ValidationError("cannot build a histogram from an empty trace")
    counts = [0, 0, 0, 0]
    for n in trace:
        counts[int(n.label)] += 1
    return ClassHistogram(model_label=model_label, k=len(trace), counts=tuple(counts))


@dataclass(frozen=True)
class IntersectionEntry:
    """One training instance and the members whose top-k contained it."""

    train_id: str
    count: int
    members: tuple[str, ...]
    label: int
    text: str


@dataclass(frozen=True)
class IntersectionReport:
    """Entries sorted by member count (descending), then id."""

    n_members: int
    entries: tuple[IntersectionEntry, ...]

    def __post_init__(self) -> None:
        for e in self.entries:
            if not 1 <= e.count <= self.n_members:
                raise ValidationError(
                    f"entry {e.train_id!r} has count {e.count}, "
                    f"valid range is 1..{self.n_members}"
                )

    def shared(self) -> tuple[IntersectionEntry, ...]:
        """Entries chosen by more than one member."""
        return tuple(e for e in self.entries if e.count >= 2)


def neighbor_intersection(
    traces: Sequence[Sequence[Neighbor]],
    member_labels: Sequence[str] | None = None,
    train_texts: Mapping[str, str] | None = None,
) -> IntersectionReport:
    """Count, per training id, how many distinct members retrieved it."""
    if not traces:
        raise ValidationError("need at least one member trace")
    if member_labels is None:
        member_labels = [f"member {i}" for i in range(len(traces))]
    if len(member_labels) != len(traces):
        raise ValidationError("one label per member trace required")
    texts = train_texts or {}

    chosen_by: dict[str, list[str]] = {}
    label_of: dict[str, int] = {}
    for member, trace in zip(member_labels, traces):
        seen_ids = set()
        for n in trace:
            label_of[n.train_id] = int(n.label)
            if n.train_id not in seen_ids:
                chosen_by.setdefault(n.train_id, []).append(member)
                seen_ids.add(n.train_id)

    entries = [
        IntersectionEntry(
            train_id=tid,
            count=len(members),
            members=tuple(members),
            label=label_of[tid],
            text=texts.get(tid, ""),
        )
        for tid, members in chosen_by.items()
    ]
    entries.sort(key=lambda e: (-e.count, e.train_id))
    return IntersectionReport(n_members=len(traces), entries=tuple(entries))


@dataclass(frozen=True)
class ExplanationReport:
    """Everything about one explained prediction, serializable both ways."""

    instance_id: str
    final_score: float
    rounded_label: int
    member_labels: tuple[str, ...]
    member_scores: tuple[float, ...]
    histograms: tuple[ClassHistogram, ...]
    intersection: IntersectionReport

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @staticmethod
    def from_json(payload: str) -> "ExplanationReport":
        raw = json.loads(payload)
        return ExplanationReport(
            instance_id=raw["instance_id"],
            final_score=raw["final_score"],
            rounded_label=raw["rounded_label"],
            member_labels=tuple(raw["member_labels"]),
            member_scores=tuple(raw["member_scores"]),
            histograms=tuple(
                ClassHistogram(h["model_label"], h["k"], tuple(h["counts"]))
                for h in raw["histograms"]
            ),
            intersection=IntersectionReport(
                n_members=raw["intersection"]["n_members"],
                entries=tuple(
                    IntersectionEntry(
                        train_id=e["train_id"],
                        count=e["count"],
                        members=tuple(e["members"]),
                        label=e["label"],
                        text=e["text"],
                    )
                    for e in raw["intersection"]["entries"]
                ),
            ),
        )

    def to_text(self) -> str:
        lines = [
            f"Instance {self.instance_id}",
            f"  final score {self.final_score!r} -> label {self.rounded_label}",
            "",
            "  Member votes (neighbor classes 0/1/2/3):",
        ]
        for label, score, hist in zip(self.member_labels, self.member_scores, self.histograms):
            counts = "/".join(str(c) for c in hist.counts)
            lines.append(f"    {label} (k={hist.k}): score {score!r}, classes {counts}")
        lines.append("")
        shared = self.intersection.shared()
        if shared:
            lines.append("  Training instances chosen by several members:")
            for e in shared:
                text = f" {e.text!r}" if e.text else ""
                lines.append(
                    f"    {e.train_id} (class {e.label}) chosen by {e.count} of "
                    f"{self.intersection.n_members}: {', '.join(e.members)}{text}"
                )
        else:
            lines.append("  No shared neighbors: no training instance was chosen by more than one member.")
        return "\n".join(lines) + "\n"


def render_explanation(
    prediction: EnsemblePrediction,
    histograms: Sequence[ClassHistogram],
    intersection: IntersectionReport,
) -> ExplanationReport:
    """Assemble the structured report for one prediction."""
    if len(histograms) != len(prediction.traces):
        raise ValidationError("one histogram per member trace required")
    for hist, trace in zip(histograms, prediction.traces):
        if hist.k != len(trace):
            raise ValidationError(
                f"histogram k={hist.k} does not match trace length {len(trace)}"
            )
    if intersection.n_members != len(prediction.traces):
        raise ValidationError("intersection member count does not match prediction")
    return ExplanationReport(
        instance_id=prediction.instance_id,
        final_score=prediction.final_score,
        rounded_label=int(prediction.rounded),
        member_labels=tuple(h.model_label for h in histograms),
        member_scores=prediction.member_scores,
        histograms=tuple(histograms),
        intersection=intersection,
    )
