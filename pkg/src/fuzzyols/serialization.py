"""JSON documents for inference systems.

Layout (version 1)::

    {
      "format": "fuzzyols-fis",
      "version": 1,
      "conjunction": "min" | "prod",
      "regime": "standardized" | "gaussian",
      "output": "<name>",
      "inputs": [
        {"name": "...", "range": [lo, hi],
         "partition": {"kind": "standardized", "centers": [c1, ...]}
                    | {"kind": "gaussian", "sets": [[center, sigma], ...]}},
        ...
      ],
      "rules": [{"premise": [[variable, set], ...], "conclusion": value}, ...]
    }

Set and variable indices are zero-based. Floats are written with ``repr`` so
loading gives back the exact same values.
"""
from __future__ import annotations

import json
from pathlib import Path

from .exceptions import FisFormatError, FisVersionError
from .fis import FuzzyInferenceSystem, FuzzyPartition, MembershipFunction, Rule

FORMAT_TAG = "fuzzyols-fis"
FORMAT_VERSION = 1


def _partition_doc(part: FuzzyPartition) -> dict:
    if part.standardized:
        return {"kind": "standardized", "centers": list(part.centers)}
    return {"kind": "gaussian", "sets": [[mf.params[0], mf.params[1]] for mf in part.mfs]}


def fis_to_dict(fis: FuzzyInferenceSystem) -> dict:
    return {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "conjunction": fis.conjunction,
        "regime": fis.regime,
        "output": fis.output_name,
        "inputs": [
            {"name": name, "range": [lo, hi], "partition": _partition_doc(part)}
            for name, (lo, hi), part in zip(fis.input_names, fis.input_ranges, fis.partitions)
        ],
        "rules": [
            {"premise": [[v, s] for v, s in rule.premise], "conclusion": rule.conclusion}
            for rule in fis.rules
        ],
    }


def dumps_fis(fis: FuzzyInferenceSystem) -> str:
    return json.dumps(fis_to_dict(fis), indent=1, allow_nan=False) + "\n"


def _partition_from_doc(j: int, doc: dict) -> FuzzyPartition:
    kind = doc["kind"]
    if kind == "standardized":
        return FuzzyPartition.standardized_from_centers(j, [float(c) for c in doc["centers"]])
    if kind == "gaussian":
        sets = [(float(c), float(s)) for c, s in doc["sets"]]
        return FuzzyPartition(
            j, tuple(c for c, _ in sets), tuple(MembershipFunction.gaussian(c, s) for c, s in sets), False
        )
    raise FisFormatError(f"input {j}: unknown partition kind {kind!r}")


def fis_from_dict(doc: dict) -> FuzzyInferenceSystem:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_TAG:
        raise FisFormatError("not a fuzzyols FIS document")
    if doc.get("version") != FORMAT_VERSION:
        raise FisVersionError(
            f"unsupported FIS document version {doc.get('version')!r}; expected {FORMAT_VERSION}"
        )
    try:
        inputs = doc["inputs"]
        partitions = [_partition_from_doc(j, item["partition"]) for j, item in enumerate(inputs)]
        rules = [
            Rule(tuple((int(v), int(s)) for v, s in item["premise"]), float(item["conclusion"]))
            for item in doc["rules"]
        ]
        return FuzzyInferenceSystem(
            partitions=tuple(partitions),
            rules=tuple(rules),
            conjunction=doc["conjunction"],
            input_ranges=tuple((float(i["range"][0]), float(i["range"][1])) for i in inputs),
            input_names=tuple(str(i["name"]) for i in inputs),
            output_name=str(doc["output"]),
            regime=doc["regime"],
        )
    except FisFormatError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FisFormatError(f"malformed FIS document: {exc!r}") from exc


def loads_fis(text: str) -> FuzzyInferenceSystem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FisFormatError(
            f"parse error at line {exc.lineno}, column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from exc
    return fis_from_dict(doc)


def save_fis(fis: FuzzyInferenceSystem, path) -> None:
    Path(path).write_text(dumps_fis(fis))


def load_fis(path) -> FuzzyInferenceSystem:
    return loads_fis(Path(path).read_text())
