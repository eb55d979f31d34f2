"""Ingestion of externally exported Maass-form spectral data.

JSON schema: {"forms": [{"r": <real>, "parity": <1 or -1>,
"a": {"2": <real>, "3": <real>, ...}}]} with records ascending in r.
The data is treated as external ground truth: only sanity ranges are
checked.  ``direct_spectral_sum`` evaluates the spectral average directly
from such a table so it can be compared against the geometric side.
"""

import json
import math
from dataclasses import dataclass

from . import murmuration, testfn
from .errors import DomainError, ParseError


@dataclass(frozen=True)
class EigenRecord:
    """One form: spectral parameter r (eigenvalue 1/4 + r²), parity, and
    Hecke coefficients a(n) with a(1) = 1."""

    r: float
    parity: int
    coeffs: dict


def load_eigen_table(path):
    """Parse and validate a JSON eigen table; records must ascend in r."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError("cannot read eigen table: %s" % exc, source=str(path))
    if not isinstance(doc, dict) or "forms" not in doc:
        raise ParseError("eigen table missing 'forms' key", source=str(path))
    records = []
    prev_r = None
    for i, raw in enumerate(doc["forms"]):
        def bad(msg):
            return ParseError("record %d: %s" % (i, msg), source=str(path),
                              index=i)

        if not isinstance(raw, dict):
            raise bad("not an object")
        try:
            r = float(raw["r"])
            parity = raw["parity"]
            amap = raw["a"]
        except (KeyError, TypeError, ValueError) as exc:
            raise bad("missing or malformed field (%s)" % exc)
        if parity not in (-1, 1):
            raise bad("parity must be -1 or 1, got %r" % (parity,))
        if not r > 0:
            raise bad("spectral parameter must be positive")
        if prev_r is not None and r <= prev_r + 1e-9:
            raise bad("records must be strictly ascending in r "
                      "(duplicate within 1e-9 rejected)")
        prev_r = r
        try:
            coeffs = {int(k): float(v) for k, v in amap.items()}
        except (TypeError, ValueError) as exc:
            raise bad("bad coefficient map (%s)" % exc)
        if coeffs.get(1, 1.0) != 1.0:
            raise bad("a(1) must equal 1 (Hecke normalization)")
        coeffs.setdefault(1, 1.0)
        for n, v in coeffs.items():
            if n < 1:
                raise bad("coefficient index %d < 1" % n)
            if abs(v) > 10.0:
                raise bad("coefficient a(%d) = %g outside sanity range" % (n, v))
        records.append(EigenRecord(r=r, parity=int(parity), coeffs=coeffs))
    return records


def direct_spectral_sum(n, spec, records):
    """(sum over records of F(r/2 pi)·a(n), truncation_mass).

    For n < 0 the coefficient is parity·a(|n|).  truncation_mass is a
    smoothed-count estimate of the |F| weight beyond the table's largest r;
    a large value means the table cannot resolve this window.
    """
    n = int(n)
    if n == 0:
        raise DomainError("n must be nonzero")
    total = 0.0
    r_max = 0.0
    for rec in records:
        r_max = max(r_max, rec.r)
        a = rec.coeffs.get(abs(n))
        if a is None:
            raise DomainError(
                "eigen record at r = %g lacks coefficient a(%d)" % (rec.r, abs(n)))
        if n < 0:
            a *= rec.parity
        f = testfn.f_eval(spec, rec.r / (2.0 * math.pi))
        total += f * a
    lo = max(spec.R - spec.H, r_max)
    hi = spec.R + spec.H
    if hi > lo and hi > 1 and lo > 1:
        mass = murmuration.weyl_count(hi) - murmuration.weyl_count(lo)
    elif r_max >= hi:
        mass = 0.0
    else:
        mass = murmuration.weyl_window(spec.R, spec.H)
    return total, mass
