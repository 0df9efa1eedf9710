"""Concept and feature tags for the roster, per-algorithm metadata, and queries.

Tag membership is stored data, not inferred from code. Descriptions in the
source literature speak of maximisation; the library minimises, which does not
change any tag.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum

from natcomp.algorithms.base import ROSTER
from natcomp.core import InvalidArgument


class ConceptTag(str, Enum):
    HILL_CLIMBING = "hill-climbing"
    ACCEPTING_NEGATIVE_MOVES = "accepting-negative-moves"
    RESTARTS = "restarts"
    ADAPTIVE_MEMORY = "adaptive-memory"
    POPULATION_BASED = "population-based"
    INTERMEDIATE_SEARCH = "intermediate-search"
    DIRECTIONAL_SEARCH = "directional-search"
    VARIABLE_NEIGHBOURHOOD_SEARCH = "variable-neighbourhood-search"
    SEARCH_SPACE_MAPPING = "search-space-mapping"


class FeatureTag(str, Enum):
    USES_HISTORICAL_BESTS = "uses-historical-bests"
    USES_VELOCITY = "uses-velocity"
    TIME_DEPENDENT_MOVE_SIZE = "time-dependent-move-size"
    DISTANCE_DEPENDENT_MOVE_SIZE = "distance-dependent-move-size"
    REGION_BASED_SAMPLING = "region-based-sampling"
    LOCAL_SEARCH_HYBRID = "local-search-hybrid"
    RANDOM_RESTART_DIVERSIFICATION = "random-restart-diversification"
    RANDOM_WALK_DIVERSIFICATION = "random-walk-diversification"
    SPIRAL_TRAJECTORY = "spiral-trajectory"
    INVERSE_SQUARE_ATTRACTION = "inverse-square-attraction"
    TARGET_POPULATION_BEST_ONLY = "target-population-best-only"
    TARGET_FITNESS_INFORMED = "target-fitness-informed"
    TARGET_ALL_OTHERS = "target-all-others"
    TARGET_SUMMARIZED = "target-summarized"
    TARGET_TIME_VARYING = "target-time-varying"
    PSO_LIKE = "pso-like"
    ES_LIKE = "es-like"
    EA_LIKE = "ea-like"
    SA_LIKE_ACCEPTANCE = "sa-like-acceptance"


TAGS = {t.value: t for t in (*ConceptTag, *FeatureTag)}
UNIVERSAL = frozenset({ConceptTag.HILL_CLIMBING, ConceptTag.ADAPTIVE_MEMORY, ConceptTag.POPULATION_BASED})


def _ids(text: str) -> frozenset[str]:
    return frozenset(text.split())


_PSO_LIKE = _ids("ABC BeA BA COA CSO CSS FA FOA FPA GSA GSO GWO GwSO KH MFO TLBO WCA WOA")
_EA_LIKE = _ids("BBO BSO COA ICA SFLA SCA")
_RESTARTS = _ids("ABC BFO BeA CS SFLA")
_SA_LIKE = _ids("BA CRO")
_WALKS = _ids("ALO BFO CS GSO KH MBO")
_SPIRAL = _ids("GWO MFO WOA")

# Feature tag -> members. MBO carries no family tag (pso-like / ea-like); its
# classification is ambiguous in the source prose.
FEATURES: dict[FeatureTag, frozenset[str]] = {
    FeatureTag.USES_HISTORICAL_BESTS: _ids("PSO KH MFO"),
    FeatureTag.USES_VELOCITY: _ids("PSO CSS GSA"),
    FeatureTag.TIME_DEPENDENT_MOVE_SIZE: _ids("ABC ALO BB-BC CSS IWO MBO"),
    FeatureTag.DISTANCE_DEPENDENT_MOVE_SIZE: _ids("CSS FA GSA"),
    FeatureTag.REGION_BASED_SAMPLING: _ids("ALO BA BeA BB-BC FWA GWO WOA"),
    FeatureTag.LOCAL_SEARCH_HYBRID: _ids("CSO CRO COA FWA IWO MBO WCA"),
    FeatureTag.RANDOM_RESTART_DIVERSIFICATION: _RESTARTS,
    FeatureTag.RANDOM_WALK_DIVERSIFICATION: _WALKS,
    FeatureTag.SPIRAL_TRAJECTORY: _SPIRAL,
    FeatureTag.INVERSE_SQUARE_ATTRACTION: _ids("CSS FA GSA"),
    FeatureTag.TARGET_POPULATION_BEST_ONLY: _ids("BA CSO FOA"),
    FeatureTag.TARGET_FITNESS_INFORMED: _ids("GwSO WCA GWO COA"),
    # Source list reads "CSS, FA, GAO"; "GAO" names no roster algorithm and is
    # presumed to mean GSA, the third all-pairs attraction algorithm.
    FeatureTag.TARGET_ALL_OTHERS: _ids("CSS FA GSA"),
    FeatureTag.TARGET_SUMMARIZED: _ids("KH BB-BC"),
    FeatureTag.TARGET_TIME_VARYING: _ids("MFO WOA"),
    FeatureTag.PSO_LIKE: _PSO_LIKE,
    FeatureTag.ES_LIKE: _ids("BeA HS IWO"),
    FeatureTag.EA_LIKE: _EA_LIKE,
    FeatureTag.SA_LIKE_ACCEPTANCE: _SA_LIKE,
}

# Concept tag -> members. Intermediate search comes from PSO-like moves or
# EA-like recombination; directional search from PSO-like moves; spiral
# trajectories count as variable neighbourhood search. GA and PSO carry the
# concepts their frameworks are given as examples of.
CONCEPTS: dict[ConceptTag, frozenset[str]] = {
    ConceptTag.HILL_CLIMBING: frozenset(ROSTER),
    ConceptTag.ACCEPTING_NEGATIVE_MOVES: _SA_LIKE | _WALKS,
    ConceptTag.RESTARTS: _RESTARTS,
    ConceptTag.ADAPTIVE_MEMORY: frozenset(ROSTER),
    ConceptTag.POPULATION_BASED: frozenset(ROSTER),
    ConceptTag.INTERMEDIATE_SEARCH: _PSO_LIKE | _EA_LIKE | {"GA", "PSO"},
    ConceptTag.DIRECTIONAL_SEARCH: _PSO_LIKE | {"PSO"},
    ConceptTag.VARIABLE_NEIGHBOURHOOD_SEARCH: _SPIRAL | {"PSO"},
    ConceptTag.SEARCH_SPACE_MAPPING: frozenset(),
}

MEMBERS: dict[Enum, frozenset[str]] = {**CONCEPTS, **FEATURES}


@dataclass(frozen=True)
class ComponentManifest:
    algorithm: str
    concepts: tuple[ConceptTag, ...]
    features: tuple[FeatureTag, ...]

    @property
    def tags(self) -> frozenset:
        return frozenset(self.concepts) | frozenset(self.features)

    def __contains__(self, tag) -> bool:
        return _tag(tag) in self.tags


@dataclass(frozen=True)
class AlgorithmMetadata:
    acronym: str
    name: str
    year: int
    citations: str  # verbatim band from the glossary header
    key: str  # citation key of the seminal reference
    note: str = ""


METADATA: dict[str, AlgorithmMetadata] = {m.acronym: m for m in (
    AlgorithmMetadata("GA", "Genetic Algorithm", 1975, ">60000 citations", "holland1975ga"),
    AlgorithmMetadata("PSO", "Particle Swarm Optimisation", 1995, ">50000 citations", "eberhart1995particle"),
    AlgorithmMetadata("ALO", "Ant Lion Optimizer", 2015, ">300 citations", "mirjalili2015alo"),
    AlgorithmMetadata("ABC", "Artificial Bee Colony Algorithm", 2005, ">4500 citations", "karaboga05abc"),
    AlgorithmMetadata("BFO", "Bacterial Foraging Optimization", 2002, ">2500 citations", "passino02bfo"),
    AlgorithmMetadata("BA", "Bat Algorithm", 2012, ">600 citations", "yang12ba"),
    AlgorithmMetadata("BeA", "Bees Algorithm", 2006, ">1000 citations", "pham06ba"),
    AlgorithmMetadata("BB-BC", "Big Bang-Big Crunch", 2006, ">600 citations", "erol06bbbc"),
    AlgorithmMetadata("BBO", "Biogeography-Based Optimizer", 2008, "~2000 citations", "simon08bbo"),
    AlgorithmMetadata("BSO", "Brain Storm Optimization", 2011, ">300 citations", "shi2011brain"),
    AlgorithmMetadata("CSO", "Cat Swarm Optimization", 2006, "~300 citations", "chu06cat"),
    AlgorithmMetadata("CSS", "Charged System Search", 2010, "~600 citations", "kaveh10css"),
    AlgorithmMetadata("CRO", "Chemical Reaction Optimization", 2010, ">300 citations", "lam10cro"),
    AlgorithmMetadata("COA", "Cuckoo Optimization Algorithm", 2011, "~500 citations", "rajabioun11coa"),
    AlgorithmMetadata("CS", "Cuckoo Search", 2009, "~3000 citations", "yang09cs"),
    AlgorithmMetadata("FA", "Firefly Algorithm", 2009, ">2000 citations", "yang09fa"),
    AlgorithmMetadata("FWA", "Firework Algorithm", 2010, ">300 citations", "tan10fwa"),
    AlgorithmMetadata("FPA", "Flower Pollination Algorithm", 2012, ">500 citations", "yang12fpa"),
    AlgorithmMetadata("FOA", "Fruit Fly Optimization Algorithm", 2012, ">600 citations", "pan12foa"),
    AlgorithmMetadata("GwSO", "Glowworm Swarm Optimization", 2005, ">600 citations", "krishnanand05gso",
                      "Citation count includes krishnanand09gso"),
    AlgorithmMetadata("GSA", "Gravitational Search Algorithm", 2009, ">2500 citations", "rashedi09gsa"),
    AlgorithmMetadata("GWO", "Grey Wolf Optimizer", 2014, ">1000 citations", "mirjalili14gwo"),
    AlgorithmMetadata("GSO", "Group Search Optimizer", 2009, ">500 citations", "he09gso"),
    AlgorithmMetadata("HS", "Harmony Search", 2001, "~4000 citations", "geem01hs"),
    AlgorithmMetadata("ICA", "Imperialist Competitive Algorithm", 2007, "~1500 citations", "atashpaz07ica"),
    AlgorithmMetadata("IWO", "Invasive Weed Optimization", 2006, ">750 citations", "mehrabian06iwo"),
    AlgorithmMetadata("KH", "Krill Herd", 2012, ">600 citations", "gandomi12kh"),
    AlgorithmMetadata("MBO", "Marriage in Honey Bees Optimization", 2001, "~400 citations", "abbass01mbo"),
    AlgorithmMetadata("MFO", "Moth-Flame Optimization", 2015, "~250 citations", "mirjalili15mfo"),
    AlgorithmMetadata("SFLA", "Shuffled Frog Leaping Algorithm", 2003, ">1000 citations", "eusuff03sfla"),
    AlgorithmMetadata("SCA", "Society and Civilisation Algorithm", 2003, ">300 citations", "ray03sca"),
    AlgorithmMetadata("TLBO", "Teacher-Learning Based Optimization", 2011, ">1000 citations", "rao11tlbo"),
    AlgorithmMetadata("WCA", "Water Cycle Algorithm", 2009, "~250 citations", "shah09iwd"),
    AlgorithmMetadata("WOA", "Whale Optimization Algorithm", 2016, "~250 citations", "mirjalili16woa"),
)}


def _check_id(algorithm_id: str) -> str:
    if algorithm_id not in METADATA:
        raise InvalidArgument(f"unknown algorithm {algorithm_id!r}; valid ids: {', '.join(ROSTER)}")
    return algorithm_id


def _tag(tag) -> Enum:
    if isinstance(tag, (ConceptTag, FeatureTag)):
        return tag
    try:
        return TAGS[tag]
    except (KeyError, TypeError):
        raise InvalidArgument(f"unknown tag {tag!r}; valid tags: {', '.join(TAGS)}") from None


def manifest_of(algorithm_id: str) -> ComponentManifest:
    _check_id(algorithm_id)
    return ComponentManifest(
        algorithm_id,
        tuple(t for t in ConceptTag if algorithm_id in CONCEPTS[t]),
        tuple(t for t in FeatureTag if algorithm_id in FEATURES[t]),
    )


def algorithms_with(tag) -> tuple[str, ...]:
    """Members of ``tag`` in roster order."""
    members = MEMBERS[_tag(tag)]
    return tuple(a for a in ROSTER if a in members)


def similarity(a: str, b: str) -> float:
    """Jaccard index of the two algorithms' concept and feature tags."""
    ta, tb = manifest_of(a).tags, manifest_of(b).tags
    union = ta | tb
    return len(ta & tb) / len(union) if union else 1.0


def inverted_index() -> dict[str, tuple[str, ...]]:
    return {name: algorithms_with(tag) for name, tag in TAGS.items()}


def export_metadata() -> list[dict]:
    """One record per algorithm, roster order; keys acronym, name, year, citations, concepts, features."""
    out = []
    for a in ROSTER:
        m, man = METADATA[a], manifest_of(a)
        out.append({
            "acronym": m.acronym, "name": m.name, "year": m.year, "citations": m.citations,
            "concepts": [t.value for t in man.concepts],
            "features": [t.value for t in man.features],
            "note": m.note,
        })
    return out


def metadata_csv(records: list[dict] | None = None) -> str:
    """Line-oriented CSV; tag lists are joined with ';'."""
    records = export_metadata() if records is None else records
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    keys = ["acronym", "name", "year", "citations", "concepts", "features", "note"]
    w.writerow(keys)
    for r in records:
        w.writerow([";".join(r[k]) if isinstance(r[k], list) else r[k] for k in keys])
    return buf.getvalue()


def metadata_json(records: list[dict] | None = None) -> str:
    records = export_metadata() if records is None else records
    return json.dumps({"algorithms": records}, indent=2) + "\n"
