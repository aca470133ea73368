"""Versioned JSON documents and plain-text exports.

Every document carries a format tag and a sha256 digest of its mathematical
content.  Provenance records the constructor, its parameters and the digests
of any ingredient documents.  Cached certificates are advisory: ``verify``
always recomputes and only reports a disagreement.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .construct import DifferenceMatrix, OrthogonalArray
from .core import CyclicDesign, SetSystem, develop, is_short_block

log = logging.getLogger(__name__)

DESIGN_FORMAT = "cyclic-design/1"
SET_FORMAT = "set-system/1"
DM_FORMAT = "difference-matrix/1"
OA_FORMAT = "orthogonal-array/1"
SEARCH_FORMAT = "search-result/1"


class DocumentError(ValueError):
    """Malformed, unknown or tampered document."""


def _digest(content: dict) -> str:
    blob = json.dumps(content, sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def _check_digest(doc: dict, content: dict) -> str:
    expected = _digest(content)
    stored = doc.get("digest")
    if stored is not None and stored != expected:
        raise DocumentError(f"digest mismatch: stored {stored}, content hashes to {expected}")
    return expected


def _check_provenance(prov: Any) -> dict:
    if prov is None:
        return {}
    if not isinstance(prov, dict):
        raise DocumentError("provenance must be an object")
    for dig in prov.get("ingredients", []):
        if not (isinstance(dig, str) and dig.startswith("sha256:") and len(dig) == 71):
            raise DocumentError(f"malformed ingredient digest {dig!r}")
    return prov


def provenance(constructor: str, params: dict | None = None, ingredients: list[str] | None = None) -> dict:
    return {"constructor": constructor, "params": dict(params or {}), "ingredients": list(ingredients or [])}


@dataclass(frozen=True)
class DesignDocument:
    design: CyclicDesign
    provenance: dict = field(default_factory=dict)
    certificates: tuple[dict, ...] = ()

    def content(self) -> dict:
        d = self.design
        return {"format": DESIGN_FORMAT, "v": d.v, "k": d.k, "kind": d.kind,
                "base_blocks": [list(b) for b in d.base_blocks]}

    @property
    def digest(self) -> str:
        return _digest(self.content())

    def to_dict(self) -> dict:
        d = self.design
        return {
            "format": DESIGN_FORMAT,
            "v": d.v,
            "k": d.k,
            "kind": d.kind,
            "base_blocks": [
                {"points": list(b), "orbit": kind} for b, kind in zip(d.base_blocks, d.orbit_kinds)
            ],
            "notes": list(d.notes),
            "provenance": self.provenance,
            "digest": self.digest,
            "certificates": [dict(c) for c in self.certificates],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> DesignDocument:
        if doc.get("format") != DESIGN_FORMAT:
            raise DocumentError(f"expected format {DESIGN_FORMAT!r}, got {doc.get('format')!r}")
        try:
            v, k, kind = int(doc["v"]), int(doc["k"]), doc.get("kind", "design")
            entries = doc["base_blocks"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed design document: {exc}") from None
        blocks = []
        for e in entries:
            pts = e["points"] if isinstance(e, dict) else e
            tag = e.get("orbit") if isinstance(e, dict) else None
            if tag is not None and (tag == "short") != is_short_block(pts, v):
                raise DocumentError(f"orbit tag {tag!r} is wrong for block {pts}")
            blocks.append(pts)
        design = CyclicDesign.from_blocks(v, k, blocks, kind, tuple(doc.get("notes", ())))
        out = cls(design, _check_provenance(doc.get("provenance")), tuple(doc.get("certificates", ())))
        if doc.get("digest") is not None:
            _check_digest(doc, out.content())
        return out

    def with_certificate(self, prop: str, bound: int | None, verdict: bool) -> DesignDocument:
        cert = {"property": prop, "bound": bound, "verdict": verdict,
                "tool_version": __version__, "digest": self.digest}
        kept = tuple(c for c in self.certificates if (c.get("property"), c.get("bound")) != (prop, bound))
        return DesignDocument(self.design, self.provenance, kept + (cert,))

    def cached(self, prop: str, bound: int | None) -> dict | None:
        return next((c for c in self.certificates if (c.get("property"), c.get("bound")) == (prop, bound)), None)


def set_system_to_dict(s: SetSystem) -> dict:
    content = {"format": SET_FORMAT, "v": s.v, "k": s.k, "kind": s.kind, "blocks": [list(b) for b in s.blocks]}
    return {**content, "digest": _digest(content)}


def set_system_from_dict(doc: dict) -> SetSystem:
    content = {key: doc[key] for key in ("format", "v", "k", "kind", "blocks") if key in doc}
    content.setdefault("kind", "design")
    _check_digest(doc, content)
    return SetSystem(int(doc["v"]), int(doc["k"]), tuple(tuple(sorted(b)) for b in doc["blocks"]), content["kind"])


def dm_to_dict(m: DifferenceMatrix, prov: dict | None = None) -> dict:
    content = {"format": DM_FORMAT, "v": m.v, "k": m.k, "entries": [list(r) for r in m.entries]}
    return {**content, "provenance": prov or {}, "digest": _digest(content)}


def dm_from_dict(doc: dict) -> DifferenceMatrix:
    content = {key: doc[key] for key in ("format", "v", "k", "entries")}
    _check_digest(doc, content)
    return DifferenceMatrix(int(doc["v"]), int(doc["k"]), doc["entries"])


def oa_to_dict(a: OrthogonalArray, prov: dict | None = None) -> dict:
    content = {"format": OA_FORMAT, "s": a.s, "t": a.t, "entries": [list(r) for r in a.entries],
               "parallel_class": None if a.parallel_class is None else list(a.parallel_class)}
    return {**content, "provenance": prov or {}, "digest": _digest(content)}


def oa_from_dict(doc: dict) -> OrthogonalArray:
    content = {key: doc.get(key) for key in ("format", "s", "t", "entries", "parallel_class")}
    _check_digest(doc, content)
    pc = doc.get("parallel_class")
    return OrthogonalArray(int(doc["s"]), int(doc["t"]), doc["entries"], None if pc is None else tuple(pc))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def read_document(path: str | Path) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict) or "format" not in doc:
        raise DocumentError(f"{path}: missing format tag")
    return doc


def load_system(doc: dict) -> tuple[SetSystem, DesignDocument | None]:
    """Explicit block list of a design or set-system document."""
    fmt = doc.get("format")
    if fmt == DESIGN_FORMAT:
        dd = DesignDocument.from_dict(doc)
        return develop(dd.design), dd
    if fmt == SET_FORMAT:
        return set_system_from_dict(doc), None
    raise DocumentError(f"format {fmt!r} does not describe a set system")


# ---------------------------------------------------------------- exports


def export_blocks(s: SetSystem) -> str:
    """One block per line, ascending points separated by single spaces."""
    return "".join(" ".join(map(str, b)) + "\n" for b in s.blocks)


def export_orbits(d: CyclicDesign) -> str:
    return "".join(f"{kind}: {' '.join(map(str, b))}\n" for b, kind in zip(d.base_blocks, d.orbit_kinds))


def correlations(codewords: list[tuple[int, ...]], n: int) -> tuple[int, int]:
    """Maximum out-of-phase autocorrelation and maximum cross-correlation."""
    if not codewords:
        return 0, 0
    ind = np.zeros((len(codewords), n), dtype=np.int64)
    for i, c in enumerate(codewords):
        ind[i, list(c)] = 1
    auto = cross = 0
    off = ~np.eye(len(codewords), dtype=bool)
    for shift in range(n):
        corr = ind @ np.roll(ind, shift, axis=1).T
        if shift:
            auto = max(auto, int(np.diag(corr).max()))
        if len(codewords) > 1:
            cross = max(cross, int(corr[off].max()))
    return auto, cross


def export_ooc(d: CyclicDesign) -> list[tuple[int, ...]]:
    """Optical orthogonal code: one codeword support per full orbit."""
    if d.short_block is not None:
        log.warning("short orbit %s dropped from the optical orthogonal code", list(d.short_block))
    code = list(d.full_blocks)
    auto, cross = correlations(code, d.v)
    if auto > 1 or cross > 1:
        raise AssertionError(f"code correlations exceed 1 (auto {auto}, cross {cross})")
    return code
