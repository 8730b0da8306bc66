"""Experiment orchestration: sweeps, test-set prediction, explanation dumps.

Configs are YAML documents with nested sections (data, resources, lexicons,
embeddings, sweep, ensemble); relative paths resolve against the config
file's directory. Grid points run in a thread pool but results are written
by a single writer in grid order, so output bytes never depend on the worker
count, and every run with identical inputs is byte-identical.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import yaml

from .data import (
    Dataset,
    Emotion,
    PredictionRecord,
    Split,
    merge,
    parse_dataset,
    write_predictions,
)
from .ensemble import EnsembleConfig, EnsemblePrediction, MemberSpec
from .errors import EmoknnError, ParseError, ValidationError
from .evaluation import EvalReport, assign_folds, cross_validate, ttest_two_sided
from .explain import class_histogram, neighbor_intersection, render_explanation
from .features import EmbeddingStore, FeatureMode, FeatureSpec, load_embeddings
from .knn import Aggregation
from .lexicon import (
    CANONICAL_ORDER,
    FormatDescriptor,
    Lexicon,
    LexiconName,
    SCHEMAS,
    load_lexicon,
)
from .pipeline import (
    EnsemblePipeline,
    FeatureContext,
    cleaning_variant,
    parse_cleaning_variant,
)
from .preprocess import load_emojis, load_emoticons, load_stopwords

N_FOLDS = 5

SWEEP_COLUMNS = (
    "emotion", "embedding", "cleaning", "lexicon", "mode", "k", "aggregation",
    "fold_0", "fold_1", "fold_2", "fold_3", "fold_4", "mean_pcc", "error",
)
TTEST_COLUMNS = (
    "emotion", "embedding", "lexicon", "mode", "k", "aggregation",
    "cleaning_a", "cleaning_b", "t", "p", "error",
)

_CLEANING_RANK = {"raw": 0, "general": 1, "general+stopwords": 2}


@dataclass(frozen=True)
class DataPaths:
    train: Path
    dev: Path | None = None
    test: Path | None = None


@dataclass(frozen=True)
class LexiconSource:
    path: Path
    descriptor: Path | None = None


@dataclass(frozen=True)
class ResourcePaths:
    emoticons: Path | None = None
    emojis: Path | None = None
    stopwords: Path | None = None


@dataclass(frozen=True)
class SweepGrid:
    embedding: str | None
    cleaning: tuple[str, ...]
    ks: tuple[int, ...]
    lexicons: tuple[LexiconName | None, ...]
    aggregation: Aggregation = Aggregation.WEIGHTED_MEAN


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    out: Path
    data: Mapping[Emotion, DataPaths]
    resources: ResourcePaths
    lexicons: Mapping[LexiconName, LexiconSource]
    embeddings: Mapping[str, str]
    sweep: SweepGrid | None
    ensemble_members: Mapping[Emotion, tuple[MemberSpec, ...]]
    explain_ids: tuple[str, ...]

    def emotions(self) -> tuple[Emotion, ...]:
        return tuple(sorted(self.data, key=lambda e: e.value))


def _as_path(base: Path, value) -> Path:
    p = Path(str(value))
    return p if p.is_absolute() else base / p


def _parse_member(raw: Mapping, base: Path) -> MemberSpec:
    embedding = raw.get("embedding") or None
    lexicon = raw.get("lexicon")
    lexicon = LexiconName(lexicon) if lexicon not in (None, "", "none") else None
    if embedding and lexicon:
        mode = FeatureMode.APPENDED
    elif embedding:
        mode = FeatureMode.EMBEDDING_ONLY
    elif lexicon:
        mode = FeatureMode.LEXICON_ONLY
    else:
        raise ValidationError("ensemble member needs an embedding, a lexicon, or both")
    return MemberSpec(
        feature=FeatureSpec(mode=mode, embedding=embedding, lexicon=lexicon),
        k=int(raw.get("k", 1)),
        aggregation=Aggregation(raw.get("aggregation", "weighted_mean")),
        cleaning=parse_cleaning_variant(raw.get("cleaning", "raw")),
        label=str(raw.get("label", "")),
    )


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and type-check a config file; artifact checks happen later."""
    path = Path(path)
    base = path.parent
    try:
        with path.open("r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ParseError(f"invalid YAML: {exc}", str(path)) from None
    if not isinstance(raw, Mapping):
        raise ParseError("config root must be a mapping", str(path))
    if "data" not in raw or not raw["data"]:
        raise ValidationError("config needs a non-empty `data` section")

    data: dict[Emotion, DataPaths] = {}
    for emo_key, section in raw["data"].items():
        emotion = Emotion(emo_key)
        if "train" not in section:
            raise ValidationError(f"data.{emotion.value} needs a `train` path")
        data[emotion] = DataPaths(
            train=_as_path(base, section["train"]),
            dev=_as_path(base, section["dev"]) if section.get("dev") else None,
            test=_as_path(base, section["test"]) if section.get("test") else None,
        )

    res_raw = raw.get("resources") or {}
    resources = ResourcePaths(
        emoticons=_as_path(base, res_raw["emoticons"]) if res_raw.get("emoticons") else None,
        emojis=_as_path(base, res_raw["emojis"]) if res_raw.get("emojis") else None,
        stopwords=_as_path(base, res_raw["stopwords"]) if res_raw.get("stopwords") else None,
    )

    lexicons: dict[LexiconName, LexiconSource] = {}
    for name_key, section in (raw.get("lexicons") or {}).items():
        name = LexiconName(name_key)
        if isinstance(section, Mapping):
            lexicons[name] = LexiconSource(
                path=_as_path(base, section["path"]),
                descriptor=_as_path(base, section["descriptor"])
                if section.get("descriptor")
                else None,
            )
        else:
            lexicons[name] = LexiconSource(path=_as_path(base, section))

    embeddings = {}
    for name, template in (raw.get("embeddings") or {}).items():
        template = str(template)
        if not Path(template).is_absolute():
            template = str(base / template)
        embeddings[str(name)] = template

    sweep = None
    if raw.get("sweep"):
        s = raw["sweep"]
        lex_values = []
        for v in s.get("lexicon", ["none"]):
            lex_values.append(None if v in (None, "", "none") else LexiconName(v))
        sweep = SweepGrid(
            embedding=s.get("embedding") or None,
            cleaning=tuple(str(c) for c in s.get("cleaning", ["raw"])),
            ks=tuple(int(k) for k in s.get("k", [])),
            lexicons=tuple(lex_values),
            aggregation=Aggregation(s.get("aggregation", "weighted_mean")),
        )

    members: dict[Emotion, tuple[MemberSpec, ...]] = {}
    ens_raw = raw.get("ensemble") or {}
    if ens_raw:
        emotion_keys = {e.value for e in Emotion}
        if set(ens_raw) <= emotion_keys:
            for emo_key, section in ens_raw.items():
                members[Emotion(emo_key)] = tuple(
                    _parse_member(m, base) for m in section.get("members", [])
                )
        else:
            shared = tuple(_parse_member(m, base) for m in ens_raw.get("members", []))
            members = {emotion: shared for emotion in data}

    return ExperimentConfig(
        seed=int(raw.get("seed", 0)),
        out=_as_path(base, raw.get("out", "results")),
        data=data,
        resources=resources,
        lexicons=lexicons,
        embeddings=embeddings,
        sweep=sweep,
        ensemble_members=members,
        explain_ids=tuple(str(i) for i in raw.get("explain_ids", [])),
    )


def _select_emotions(config: ExperimentConfig, emotion: str | None) -> tuple[Emotion, ...]:
    if emotion in (None, "all"):
        return config.emotions()
    wanted = Emotion(emotion)
    if wanted not in config.data:
        raise ValidationError(f"emotion {wanted.value!r} not present in config data")
    return (wanted,)


def _load_training_dataset(paths: DataPaths) -> Dataset:
    train = parse_dataset(paths.train, Split.TRAIN)
    if paths.dev is not None:
        return merge(train, parse_dataset(paths.dev, Split.DEV))
    return train


class _ArtifactLoader:
    """Caches parsed datasets, stores, lexicons, and cleaning tables per run."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self._stores: dict[Path, EmbeddingStore] = {}
        self._lexicons: dict[LexiconName, Lexicon] | None = None
        self._tables = None

    def store_path(self, model: str, emotion: Emotion, variant: str) -> Path:
        if model not in self.config.embeddings:
            raise ValidationError(f"embedding store {model!r} not declared in config")
        template = self.config.embeddings[model]
        return Path(template.format(model=model, emotion=emotion.value, variant=variant))

    def store(self, model: str, emotion: Emotion, variant: str) -> EmbeddingStore:
        path = self.store_path(model, emotion, variant)
        if path not in self._stores:
            self._stores[path] = load_embeddings(path)
        return self._stores[path]

    def lexicons(self) -> dict[LexiconName, Lexicon]:
        if self._lexicons is None:
            loaded = {}
            for name, source in self.config.lexicons.items():
                descriptor = (
                    FormatDescriptor.load(source.descriptor)
                    if source.descriptor is not None
                    else None
                )
                loaded[name] = load_lexicon(source.path, SCHEMAS[name], descriptor)
            self._lexicons = loaded
        return self._lexicons

    def tables(self):
        if self._tables is None:
            res = self.config.resources
            self._tables = (
                load_emoticons(res.emoticons) if res.emoticons else None,
                load_emojis(res.emojis) if res.emojis else None,
                load_stopwords(res.stopwords) if res.stopwords else None,
            )
        return self._tables

    def context(self, emotion: Emotion, members: Sequence[MemberSpec]) -> FeatureContext:
        needed = {
            (m.feature.embedding, cleaning_variant(m.cleaning))
            for m in members
            if m.feature.embedding
        }
        stores = {
            (model, variant): self.store(model, emotion, variant)
            for model, variant in sorted(needed)
        }
        emoticons, emojis, stopwords = self.tables()
        return FeatureContext(
            stores=stores,
            lexicons=self.lexicons(),
            emoticons=emoticons,
            emojis=emojis,
            stopwords=stopwords,
        )


def _grid_members(grid: SweepGrid) -> list[MemberSpec]:
    """One single-member setup per grid point, in grid order."""
    members = []
    for variant in grid.cleaning:
        for lexicon in grid.lexicons:
            for k in grid.ks:
                if grid.embedding and lexicon:
                    mode = FeatureMode.APPENDED
                elif grid.embedding:
                    mode = FeatureMode.EMBEDDING_ONLY
                elif lexicon:
                    mode = FeatureMode.LEXICON_ONLY
                else:
                    raise ValidationError(
                        "sweep grid point has neither an embedding nor a lexicon"
                    )
                members.append(
                    MemberSpec(
                        feature=FeatureSpec(
                            mode=mode, embedding=grid.embedding, lexicon=lexicon
                        ),
                        k=k,
                        aggregation=grid.aggregation,
                        cleaning=parse_cleaning_variant(variant),
                        label=f"{grid.embedding or 'lexicon'}|{variant}|"
                        f"{lexicon.value if lexicon else 'none'}|k={k}",
                    )
                )
    return members


@dataclass(frozen=True)
class SweepRow:
    emotion: str
    embedding: str
    cleaning: str
    lexicon: str
    mode: str
    k: int
    aggregation: str
    per_fold: tuple[float | None, ...] | None
    mean_pcc: float | None
    error: str | None

    def cells(self) -> list[str]:
        folds = ["NA"] * N_FOLDS
        if self.per_fold is not None:
            folds = [repr(v) if v is not None else "NA" for v in self.per_fold]
        return [
            self.emotion, self.embedding, self.cleaning, self.lexicon, self.mode,
            str(self.k), self.aggregation, *folds,
            repr(self.mean_pcc) if self.mean_pcc is not None else "NA",
            self.error or "",
        ]


def _row_from_member(emotion: Emotion, member: MemberSpec,
                     report: EvalReport | None, error: str | None) -> SweepRow:
    if error is None and report is not None:
        fold_errors = "; ".join(
            f"fold {i}: {e}" for i, e in enumerate(report.fold_errors) if e
        )
        error = fold_errors or None
    return SweepRow(
        emotion=emotion.value,
        embedding=member.feature.embedding or "none",
        cleaning=cleaning_variant(member.cleaning),
        lexicon=member.feature.lexicon.value if member.feature.lexicon else "none",
        mode=member.feature.mode.value,
        k=member.k,
        aggregation=member.aggregation.value,
        per_fold=report.per_fold_pcc if report else None,
        mean_pcc=report.mean_pcc if report else None,
        error=error,
    )


def _write_tsv(path: Path, columns: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("\t".join(columns) + "\n")
        for row in rows:
            fh.write("\t".join(row) + "\n")


def select_best(rows: Sequence[SweepRow]) -> SweepRow | None:
    """Highest mean PCC; ties go to smaller k, then rawer cleaning."""
    best = None
    for row in rows:
        if row.mean_pcc is None:
            continue
        if best is None:
            best = row
            continue
        key = (-row.mean_pcc, row.k, _CLEANING_RANK.get(row.cleaning, 99))
        best_key = (-best.mean_pcc, best.k, _CLEANING_RANK.get(best.cleaning, 99))
        if key < best_key:
            best = row
    return best


@dataclass(frozen=True)
class SweepResult:
    rows: Mapping[Emotion, tuple[SweepRow, ...]]
    best: Mapping[Emotion, SweepRow | None]
    out_dir: Path


def run_sweep(
    config: ExperimentConfig,
    emotion: str | None = None,
    out: str | Path | None = None,
    seed: int | None = None,
    jobs: int = 1,
) -> SweepResult:
    """Evaluate every grid point by 5-fold CV and emit result tables.

    Grid-point failures become rows with an error field; the run continues.
    """
    if config.sweep is None:
        raise ValidationError("config has no `sweep` section")
    if not config.sweep.ks or not config.sweep.cleaning or not config.sweep.lexicons:
        raise ValidationError("sweep grids must be non-empty")
    seed = config.seed if seed is None else seed
    out_dir = Path(out) if out is not None else config.out
    loader = _ArtifactLoader(config)
    emotions = _select_emotions(config, emotion)

    all_rows: dict[Emotion, tuple[SweepRow, ...]] = {}
    best: dict[Emotion, SweepRow | None] = {}
    for emo in emotions:
        dataset = _load_training_dataset(config.data[emo])
        folds = assign_folds([i.label for i in dataset.instances], N_FOLDS, seed)
        members = _grid_members(config.sweep)

        def evaluate(member: MemberSpec) -> SweepRow:
            try:
                context = loader.context(emo, [member])
                pipeline = EnsemblePipeline(EnsembleConfig(members=(member,)), context)
                report = cross_validate(dataset, pipeline, folds, setup=member.label)
                return _row_from_member(emo, member, report, None)
            except (EmoknnError, OSError) as exc:
                return _row_from_member(emo, member, None, str(exc))

        # Stores and lexicons are loaded up front so the worker threads only
        # touch immutable state.
        try:
            loader.context(emo, members)
        except (EmoknnError, OSError):
            pass
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows = tuple(pool.map(evaluate, members))
        else:
            rows = tuple(evaluate(m) for m in members)

        all_rows[emo] = rows
        best[emo] = select_best(rows)
        _write_tsv(out_dir / f"sweep-{emo.value}.tsv", SWEEP_COLUMNS, [r.cells() for r in rows])
        best_rows = [best[emo].cells()] if best[emo] is not None else []
        _write_tsv(out_dir / f"best-{emo.value}.tsv", SWEEP_COLUMNS, best_rows)
        _write_tsv(
            out_dir / f"ttest-{emo.value}.tsv",
            TTEST_COLUMNS,
            _cleaning_ttest_rows(emo, rows, config.sweep),
        )
    return SweepResult(rows=all_rows, best=best, out_dir=out_dir)


def _cleaning_ttest_rows(
    emotion: Emotion, rows: Sequence[SweepRow], grid: SweepGrid
) -> list[list[str]]:
    """Two-sided t-tests between cleaning variants of otherwise-equal setups."""
    by_key: dict[tuple, dict[str, SweepRow]] = {}
    for row in rows:
        key = (row.embedding, row.lexicon, row.mode, row.k, row.aggregation)
        by_key.setdefault(key, {})[row.cleaning] = row
    out: list[list[str]] = []
    for key, variants in by_key.items():
        embedding, lexicon, mode, k, aggregation = key
        ordered = [v for v in grid.cleaning if v in variants]
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                row_a, row_b = variants[ordered[i]], variants[ordered[j]]
                prefix = [
                    emotion.value, embedding, lexicon, mode, str(k), aggregation,
                    ordered[i], ordered[j],
                ]
                a = [v for v in (row_a.per_fold or ()) if v is not None]
                b = [v for v in (row_b.per_fold or ()) if v is not None]
                if len(a) < N_FOLDS or len(b) < N_FOLDS:
                    out.append(prefix + ["NA", "NA", "incomplete folds"])
                    continue
                try:
                    t, p = ttest_two_sided(a, b)
                    out.append(prefix + [repr(t), repr(p), ""])
                except EmoknnError as exc:
                    out.append(prefix + ["NA", "NA", str(exc)])
    return out


def _members_for(config: ExperimentConfig, emotion: Emotion) -> tuple[MemberSpec, ...]:
    members = config.ensemble_members.get(emotion, ())
    if not members:
        raise ValidationError(
            f"config has no ensemble members for emotion {emotion.value!r}"
        )
    labeled = []
    for i, m in enumerate(members):
        labeled.append(m if m.label else replace(m, label=f"member {i}"))
    return tuple(labeled)


def _check_store_coverage(
    loader: _ArtifactLoader,
    emotion: Emotion,
    members: Sequence[MemberSpec],
    datasets: Sequence[Dataset],
) -> None:
    for member in members:
        if not member.feature.embedding:
            continue
        variant = cleaning_variant(member.cleaning)
        store = loader.store(member.feature.embedding, emotion, variant)
        missing = [
            inst.id
            for ds in datasets
            for inst in ds.instances
            if inst.id not in store
        ]
        if missing:
            raise ValidationError(
                f"embedding store {member.feature.embedding!r} ({variant}) is missing "
                f"{len(missing)} ids: {missing}"
            )


@dataclass(frozen=True)
class PredictResult:
    predictions: Mapping[Emotion, tuple[EnsemblePrediction, ...]]
    submission_paths: Mapping[Emotion, Path]
    explanation_paths: Mapping[str, Path]
    out_dir: Path


def _explain_instance(
    prediction: EnsemblePrediction,
    members: Sequence[MemberSpec],
    train: Dataset,
    out_dir: Path,
) -> Path:
    histograms = [
        class_histogram(trace, member.display_label(i))
        for i, (member, trace) in enumerate(zip(members, prediction.traces))
    ]
    intersection = neighbor_intersection(
        prediction.traces,
        member_labels=[h.model_label for h in histograms],
        train_texts={inst.id: inst.text for inst in train.instances},
    )
    report = render_explanation(prediction, histograms, intersection)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{prediction.instance_id}.json"
    json_path.write_text(report.to_json() + "\n", encoding="utf-8")
    (out_dir / f"{prediction.instance_id}.txt").write_text(
        report.to_text(), encoding="utf-8"
    )
    return json_path


def run_predict(
    config: ExperimentConfig,
    emotion: str | None = None,
    out: str | Path | None = None,
    explain_ids: Sequence[str] | None = None,
    write_submissions: bool = True,
) -> PredictResult:
    """Fit the configured ensemble per emotion and label the test data.

    Writes one submission TSV per emotion plus one explanation report per
    requested instance id.
    """
    out_dir = Path(out) if out is not None else config.out
    loader = _ArtifactLoader(config)
    emotions = _select_emotions(config, emotion)
    wanted_ids = tuple(explain_ids) if explain_ids is not None else config.explain_ids

    predictions: dict[Emotion, tuple[EnsemblePrediction, ...]] = {}
    submissions: dict[Emotion, Path] = {}
    explanations: dict[str, Path] = {}
    for emo in emotions:
        paths = config.data[emo]
        if paths.test is None:
            raise ValidationError(f"emotion {emo.value!r} has no test file configured")
        train = _load_training_dataset(paths)
        test = parse_dataset(paths.test, Split.TEST)
        members = _members_for(config, emo)
        _check_store_coverage(loader, emo, members, [train, test])

        context = loader.context(emo, members)
        pipeline = EnsemblePipeline(EnsembleConfig(members=members), context)
        fitted = pipeline.fit(train.instances)
        preds = tuple(pipeline.predict_instances(fitted, test.instances))
        predictions[emo] = preds

        if write_submissions:
            records = [
                PredictionRecord(id=p.instance_id, raw_score=p.final_score, rounded_label=p.rounded)
                for p in preds
            ]
            sub_path = out_dir / f"predictions-{emo.value}.tsv"
            sub_path.parent.mkdir(parents=True, exist_ok=True)
            write_predictions(records, test, sub_path)
            submissions[emo] = sub_path

        for pred in preds:
            if pred.instance_id in wanted_ids:
                explanations[pred.instance_id] = _explain_instance(
                    pred, members, train, out_dir / "explain"
                )

    unknown = [i for i in wanted_ids if i not in explanations]
    if unknown:
        raise ValidationError(
            f"explanation ids not found in the processed test data: {unknown}"
        )
    return PredictResult(
        predictions=predictions,
        submission_paths=submissions,
        explanation_paths=explanations,
        out_dir=out_dir,
    )


def run_explain(
    config: ExperimentConfig,
    ids: Sequence[str],
    emotion: str | None = None,
    out: str | Path | None = None,
) -> PredictResult:
    """Emit explanation reports for specific test ids, without submissions."""
    if not ids:
        raise ValidationError("explain requires at least one instance id")
    return run_predict(
        config, emotion=emotion, out=out, explain_ids=ids, write_submissions=False
    )


@dataclass(frozen=True)
class ValidationReport:
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_text(self) -> str:
        if self.ok:
            return "all artifacts valid\n"
        return "".join(f"FAIL: {f}\n" for f in self.failures)


def validate_artifacts(config: ExperimentConfig) -> ValidationReport:
    """Check datasets, lexicon schemas, store coverage, and grid sanity.

    Problems are collected and reported, never raised.
    """
    failures: list[str] = []
    loader = _ArtifactLoader(config)

    datasets: dict[Emotion, Dataset] = {}
    tests: dict[Emotion, Dataset] = {}
    for emo, paths in config.data.items():
        try:
            datasets[emo] = _load_training_dataset(paths)
        except (EmoknnError, OSError) as exc:
            failures.append(f"data.{emo.value}: {exc}")
        if paths.test is not None:
            try:
                tests[emo] = parse_dataset(paths.test, Split.TEST)
            except (EmoknnError, OSError) as exc:
                failures.append(f"data.{emo.value}.test: {exc}")

    try:
        loader.tables()
    except (EmoknnError, OSError) as exc:
        failures.append(f"resources: {exc}")

    for name, source in config.lexicons.items():
        try:
            descriptor = (
                FormatDescriptor.load(source.descriptor)
                if source.descriptor is not None
                else None
            )
            load_lexicon(source.path, SCHEMAS[name], descriptor)
        except (EmoknnError, OSError) as exc:
            failures.append(f"lexicons.{name.value}: {exc}")

    # Which (model, variant) pairs and lexicons does the run plan need?
    members: list[MemberSpec] = []
    if config.sweep is not None:
        if not config.sweep.ks:
            failures.append("sweep.k grid is empty")
        if not config.sweep.cleaning:
            failures.append("sweep.cleaning grid is empty")
        for k in config.sweep.ks:
            if k < 1 or k % 2 == 0:
                failures.append(f"sweep.k value {k} is not an odd integer >= 1")
        for variant in config.sweep.cleaning:
            try:
                parse_cleaning_variant(variant)
            except EmoknnError as exc:
                failures.append(f"sweep.cleaning: {exc}")
        try:
            members.extend(_grid_members(config.sweep))
        except EmoknnError as exc:
            failures.append(f"sweep: {exc}")
    for emo, emo_members in config.ensemble_members.items():
        for m in emo_members:
            if m.k < 1 or m.k % 2 == 0:
                failures.append(
                    f"ensemble member {m.label or m.feature!r} ({emo.value}): "
                    f"k={m.k} is not an odd integer >= 1"
                )
        members.extend(emo_members)

    needed_lexicons: set[LexiconName] = set()
    for m in members:
        if m.feature.lexicon is LexiconName.COMBINED:
            needed_lexicons.update(CANONICAL_ORDER)
        elif m.feature.lexicon is not None:
            needed_lexicons.add(m.feature.lexicon)
    for name in sorted(needed_lexicons, key=lambda n: n.value):
        if name not in config.lexicons:
            failures.append(f"lexicon {name.value!r} is referenced but not configured")

    for emo in config.data:
        relevant = list(config.ensemble_members.get(emo, ()))
        if config.sweep is not None:
            try:
                relevant.extend(_grid_members(config.sweep))
            except EmoknnError:
                pass
        pairs = {
            (m.feature.embedding, cleaning_variant(m.cleaning))
            for m in relevant
            if m.feature.embedding
        }
        for model, variant in sorted(pairs):
            try:
                store = loader.store(model, emo, variant)
            except (EmoknnError, OSError) as exc:
                failures.append(f"embeddings.{model} ({emo.value}, {variant}): {exc}")
                continue
            for ds in (d for d in (datasets.get(emo), tests.get(emo)) if d is not None):
                missing = [i.id for i in ds.instances if i.id not in store]
                if missing:
                    failures.append(
                        f"embeddings.{model} ({emo.value}, {variant}) is missing ids: "
                        f"{missing}"
                    )
    return ValidationReport(failures=tuple(failures))
