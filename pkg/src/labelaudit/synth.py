"""Seeded synthetic corpora with known ground truth.

Each generator plants a specific annotation pathology (or none) so tests can
assert that the screening metrics, explanations, and projections recover it:
keyword-separable labels, a fully co-occurring duplicate pair, HTML-polluted
records carrying a junk label, and a cluster of under-labeled records.
"""
from __future__ import annotations

import numpy as np

from .corpus import AnnotationSet, CorpusSnapshot, LabelSchema, Record

FILLER = (
    "unit",
    "technician",
    "reported",
    "site",
    "inspection",
    "checked",
    "service",
    "order",
    "noted",
    "area",
    "level",
    "status",
    "ticket",
    "followup",
    "crew",
    "shift",
)

SEPARABLE_TRIGGERS: dict[str, dict[str, tuple[str, ...]]] = {
    "problem": {
        "overheating": ("overheat", "thermal", "hot"),
        "leakage": ("leak", "drip", "fluid"),
        "vibration": ("vibration", "rattle", "shake"),
        "power_loss": ("outage", "tripped", "breaker"),
    },
    "solution": {
        "replace_part": ("replace", "spare", "installed"),
        "recalibrate": ("calibrate", "setpoint", "adjust"),
        "tighten": ("tighten", "torque", "bolt"),
        "clean_filter": ("cleaned", "filter", "flush"),
    },
    "item": {
        "pump": ("pump", "impeller", "suction"),
        "compressor": ("compressor", "refrigerant", "stage"),
        "fan": ("fan", "blade", "airflow"),
        "valve": ("valve", "actuator", "seat"),
    },
}


def _schema_from_triggers(
    triggers: dict[str, dict[str, tuple[str, ...]]]
) -> LabelSchema:
    return LabelSchema.from_dict(
        {category: list(labels) for category, labels in triggers.items()}
    )


def _record_id(i: int) -> str:
    return format(i, "06d")


def _snapshot(
    records: list[Record],
    schema: LabelSchema,
    assignments: dict[str, frozenset[str]],
) -> CorpusSnapshot:
    annotations = AnnotationSet(schema=schema, assignments=assignments, version=0)
    return CorpusSnapshot(records=tuple(records), annotations=annotations)


def _pick(rng: np.random.Generator, pool: tuple[str, ...], count: int) -> list[str]:
    idx = rng.choice(len(pool), size=min(count, len(pool)), replace=False)
    return [pool[int(i)] for i in idx]


def separable_corpus(n: int = 500, seed: int = 0) -> CorpusSnapshot:
    """Corpus where each label is announced by dedicated trigger tokens.

    One label per category per record; a linear model over token features
    can separate every label, so this is the clean-training benchmark.
    """
    rng = np.random.default_rng(seed)
    schema = _schema_from_triggers(SEPARABLE_TRIGGERS)
    records: list[Record] = []
    assignments: dict[str, frozenset[str]] = {}
    for i in range(n):
        chosen: list[tuple[str, str]] = []
        for category, labels in SEPARABLE_TRIGGERS.items():
            names = list(labels)
            chosen.append((category, names[int(rng.integers(len(names)))]))
        summary_tokens: list[str] = []
        detail_tokens: list[str] = []
        for category, label in chosen:
            picked = _pick(rng, SEPARABLE_TRIGGERS[category][label], 2)
            if category == "solution":
                detail_tokens.extend(picked)
            else:
                summary_tokens.extend(picked)
        detail_tokens.extend(_pick(rng, FILLER, int(rng.integers(2, 5))))
        rng.shuffle(summary_tokens)
        rng.shuffle(detail_tokens)
        rid = _record_id(i)
        records.append(
            Record(
                id=rid,
                text_fields=(
                    ("summary", " ".join(summary_tokens)),
                    ("detail", " ".join(detail_tokens)),
                ),
            )
        )
        assignments[rid] = frozenset(label for _, label in chosen)
    return _snapshot(records, schema, assignments)


DUPLICATE_TRIGGERS: dict[str, dict[str, tuple[str, ...]]] = {
    "problem": {
        "too_hot": ("hot", "warm", "temperature"),
        "room_hot": ("hot", "warm", "temperature"),
        "too_cold": ("cold", "chilly", "freezing"),
    },
    "solution": {
        "adjust_setpoint": ("setpoint", "adjust"),
        "restart_unit": ("restart", "reset"),
    },
    "item": {
        "thermostat": ("thermostat", "sensor"),
        "damper": ("damper", "duct"),
        "chiller": ("chiller", "coolant"),
    },
}


def duplicate_pair_corpus(n: int = 300, seed: int = 0) -> CorpusSnapshot:
    """Plants a fully co-occurring label pair (too_hot / room_hot).

    Every heat complaint carries both labels; the pair's category therefore
    scores far higher on duplication possibility than the others, where a
    record gets one label (plus an occasional mild item overlap).
    """
    rng = np.random.default_rng(seed)
    schema = _schema_from_triggers(DUPLICATE_TRIGGERS)
    records: list[Record] = []
    assignments: dict[str, frozenset[str]] = {}
    items = list(DUPLICATE_TRIGGERS["item"])
    solutions = list(DUPLICATE_TRIGGERS["solution"])
    for i in range(n):
        labels: set[str] = set()
        tokens: list[str] = []
        if rng.random() < 0.5:
            labels.update(("too_hot", "room_hot"))
            tokens.extend(_pick(rng, DUPLICATE_TRIGGERS["problem"]["too_hot"], 2))
        else:
            labels.add("too_cold")
            tokens.extend(_pick(rng, DUPLICATE_TRIGGERS["problem"]["too_cold"], 2))
        solution = solutions[int(rng.integers(len(solutions)))]
        labels.add(solution)
        tokens.extend(_pick(rng, DUPLICATE_TRIGGERS["solution"][solution], 1))
        item = items[int(rng.integers(len(items)))]
        labels.add(item)
        tokens.extend(_pick(rng, DUPLICATE_TRIGGERS["item"][item], 1))
        if rng.random() < 0.1:
            other = items[int(rng.integers(len(items)))]
            if other != item:
                labels.add(other)
                tokens.extend(_pick(rng, DUPLICATE_TRIGGERS["item"][other], 1))
        tokens.extend(_pick(rng, FILLER, int(rng.integers(1, 4))))
        rng.shuffle(tokens)
        rid = _record_id(i)
        records.append(Record(id=rid, text_fields=(("text", " ".join(tokens)),)))
        assignments[rid] = frozenset(labels)
    return _snapshot(records, schema, assignments)


HTML_JUNK = ("br", "rich", "text", "richard", "http", "span", "html", "format")

POLLUTED_TRIGGERS: dict[str, dict[str, tuple[str, ...]]] = {
    "problem": {
        "overheating": ("overheat", "thermal", "hot"),
        "leakage": ("leak", "drip", "fluid"),
        "vibration": ("vibration", "rattle", "shake"),
        "power_loss": ("outage", "tripped", "breaker"),
    },
    "item": {
        "pump": ("pump", "impeller", "suction"),
        "compressor": ("compressor", "refrigerant", "stage"),
        "fan": ("fan", "blade", "airflow"),
        "valve": ("valve", "actuator", "seat"),
        "br_richard": HTML_JUNK,
    },
}


def html_polluted_corpus(
    n: int = 400, seed: int = 0, polluted_fraction: float = 0.2
) -> CorpusSnapshot:
    """Clean keyword-labeled records plus an HTML-junk sub-corpus.

    Polluted records contain only markup fragments and carry the junk label
    br_richard; they form a low-confidence cluster whose explanations point
    at the HTML tokens.
    """
    rng = np.random.default_rng(seed)
    schema = _schema_from_triggers(POLLUTED_TRIGGERS)
    n_polluted = int(round(n * polluted_fraction))
    records: list[Record] = []
    assignments: dict[str, frozenset[str]] = {}
    problems = list(POLLUTED_TRIGGERS["problem"])
    items = [lab for lab in POLLUTED_TRIGGERS["item"] if lab != "br_richard"]
    for i in range(n):
        rid = _record_id(i)
        polluted = i < n_polluted
        if polluted:
            tokens = _pick(rng, HTML_JUNK, 5)
            labels = frozenset({"br_richard"})
        else:
            problem = problems[int(rng.integers(len(problems)))]
            item = items[int(rng.integers(len(items)))]
            tokens = _pick(rng, POLLUTED_TRIGGERS["problem"][problem], 2)
            tokens += _pick(rng, POLLUTED_TRIGGERS["item"][item], 2)
            tokens += _pick(rng, FILLER, int(rng.integers(2, 5)))
            labels = frozenset({problem, item})
        rng.shuffle(tokens)
        records.append(Record(id=rid, text_fields=(("text", " ".join(tokens)),)))
        assignments[rid] = labels
    return _snapshot(records, schema, assignments)


SCENARIO_TRIGGERS: dict[str, tuple[str, ...]] = {
    "weather": ("forecast", "rain", "sunny", "snow"),
    "music": ("song", "playlist", "album", "volume"),
    "alarm": ("alarm", "wake", "reminder", "clock"),
    "qa": ("question", "answer", "explain", "define"),
}

INTENT_TRIGGERS: dict[str, tuple[str, ...]] = {
    "query": ("lookup", "inquiry", "asking"),
    "set": ("set", "schedule", "create"),
    "remove": ("cancel", "delete", "dismiss"),
}

ENTITY_TRIGGERS: dict[str, tuple[str, ...]] = {
    "place": ("city", "town", "street"),
    "time": ("tomorrow", "tonight", "morning"),
    "person": ("friend", "mother", "colleague"),
}

PHILOSOPHY_TOKENS = (
    "philosophy",
    "ethics",
    "metaphysics",
    "apocalypticism",
    "prophecy",
    "doctrine",
    "theology",
    "treatise",
    "dialectic",
    "epistemology",
    "ontology",
    "hermeneutics",
)


def missing_label_corpus(
    n: int = 400, seed: int = 0, missing_fraction: float = 0.15
) -> CorpusSnapshot:
    """Plants an under-labeled topical cluster.

    Normal records carry scenario + intent + entity labels over short
    texts. The planted cluster shares a distinctive philosophy vocabulary,
    runs longer, and carries only its scenario label, so it sits strictly
    lowest in the information-density ranking.
    """
    rng = np.random.default_rng(seed)
    schema = LabelSchema.from_dict(
        {
            "scenario": list(SCENARIO_TRIGGERS),
            "intent": list(INTENT_TRIGGERS),
            "entity": list(ENTITY_TRIGGERS),
        }
    )
    n_missing = int(round(n * missing_fraction))
    records: list[Record] = []
    assignments: dict[str, frozenset[str]] = {}
    scenarios = list(SCENARIO_TRIGGERS)
    intents = list(INTENT_TRIGGERS)
    entities = list(ENTITY_TRIGGERS)
    for i in range(n):
        rid = _record_id(i)
        if i < n_missing:
            # 10-12 countable tokens, one label: density <= ln(1/10).
            tokens = _pick(rng, PHILOSOPHY_TOKENS, 8)
            tokens += _pick(rng, SCENARIO_TRIGGERS["qa"], 2)
            tokens += _pick(rng, FILLER, int(rng.integers(0, 3)))
            labels = frozenset({"qa"})
        else:
            # 8-14 countable tokens, three labels: density >= ln(3/14).
            scenario = scenarios[int(rng.integers(3))]  # skip "qa"
            intent = intents[int(rng.integers(len(intents)))]
            entity = entities[int(rng.integers(len(entities)))]
            tokens = _pick(rng, SCENARIO_TRIGGERS[scenario], 2)
            tokens += _pick(rng, INTENT_TRIGGERS[intent], 2)
            tokens += _pick(rng, ENTITY_TRIGGERS[entity], 2)
            tokens += _pick(rng, FILLER, int(rng.integers(2, 9)))
            labels = frozenset({scenario, intent, entity})
        rng.shuffle(tokens)
        records.append(
            Record(id=rid, text_fields=(("question", " ".join(tokens)),))
        )
        assignments[rid] = labels
    return _snapshot(records, schema, assignments)


TOPIC_A = (
    "pipe",
    "drain",
    "faucet",
    "plumbing",
    "sewer",
    "fixture",
    "gasket",
    "shutoff",
)
TOPIC_B = (
    "circuit",
    "wiring",
    "fuse",
    "amperage",
    "conduit",
    "grounding",
    "switchgear",
    "relay",
)


def two_cluster_corpus(
    n: int = 200, seed: int = 0
) -> tuple[CorpusSnapshot, dict[str, int]]:
    """Two disjoint token vocabularies; returns the cluster ground truth."""
    rng = np.random.default_rng(seed)
    schema = LabelSchema.from_dict({"topic": ["water", "electric"]})
    records: list[Record] = []
    assignments: dict[str, frozenset[str]] = {}
    clusters: dict[str, int] = {}
    for i in range(n):
        rid = _record_id(i)
        cluster = i % 2
        pool = TOPIC_A if cluster == 0 else TOPIC_B
        tokens = _pick(rng, pool, 4)
        rng.shuffle(tokens)
        records.append(Record(id=rid, text_fields=(("text", " ".join(tokens)),)))
        assignments[rid] = frozenset({"water" if cluster == 0 else "electric"})
        clusters[rid] = cluster
    return _snapshot(records, schema, assignments), clusters


def gaussian_clusters(
    n_per_cluster: int = 60,
    dim: int = 20,
    n_clusters: int = 3,
    separation: float = 10.0,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray]:
    """Unit-variance Gaussian blobs with equidistant centers.

    Centers sit at the vertices of a regular simplex scaled so every
    pairwise center distance equals ``separation``. Returns (points,
    cluster labels).
    """
    rng = np.random.default_rng(seed)
    if n_clusters > dim + 1:
        raise ValueError("need dim + 1 >= n_clusters for a regular simplex")
    corners = np.eye(n_clusters, dim)
    center = corners.mean(axis=0)
    simplex = corners - center
    # Simplex edge length is sqrt(2) for unit corners; rescale to target.
    simplex *= separation / np.sqrt(2.0)
    points = []
    labels = []
    for c in range(n_clusters):
        points.append(simplex[c] + rng.standard_normal((n_per_cluster, dim)))
        labels.extend([c] * n_per_cluster)
    return np.vstack(points), np.array(labels, dtype=np.int64)


GENERATORS = {
    "separable": separable_corpus,
    "duplicate-pair": duplicate_pair_corpus,
    "html-polluted": html_polluted_corpus,
    "missing-label": missing_label_corpus,
}


def generate(kind: str, n: int, seed: int) -> CorpusSnapshot:
    """Dispatch for the CLI synth subcommand."""
    if kind not in GENERATORS:
        raise ValueError(
            f"unknown synthetic corpus kind {kind!r}; choose from "
            f"{sorted(GENERATORS)}"
        )
    return GENERATORS[kind](n=n, seed=seed)
