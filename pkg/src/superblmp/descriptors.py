"""JSON descriptors: a family tag, numeric parameters and named q/m functions.

Schema::

    {"family": "<tag>", "params": {...}, "q": <function>, "m": <function>}

where a function is ``{"name": "zero"|"identity"|"sin"|"exp"|"poly", "a": .., "coeffs": [..]}``
and complex numbers are written as ``[re, im]``. Super families carry their
odd generator names inside ``params``.
"""
from __future__ import annotations

import json

from . import solutions as S
from . import susy
from .errors import BLMPError, DescriptorError
from .library import NamedFunction, ReductionSpec

CLASSICAL = ("rational_similarity", "n_soliton", "wronskian", "negaton2", "positon2",
             "complexiton", "rational_soliton", "rational_positon", "traveling_wave",
             "kink", "constant")
SUPER = ("super_soliton1", "super_soliton2", "superpartner")
FAMILIES = CLASSICAL + SUPER

_PARAM_KEYS = {
    "rational_similarity": {"n"},
    "n_soliton": {"kappa"},
    "wronskian": {"basis"},
    "negaton2": {"gamma"},
    "positon2": {"gamma"},
    "rational_soliton": {"gamma"},
    "rational_positon": {"gamma"},
    "complexiton": {"alpha", "beta", "eta"},
    "traveling_wave": {"a", "alpha", "c1", "c2"},
    "kink": {"a"},
    "constant": {"value"},
    "super_soliton1": {"N", "kappa", "rho", "omega", "zeta", "off_shell"},
    "super_soliton2": {"N", "kappa", "rho", "omega", "zeta", "off_shell"},
    "superpartner": {"d1", "d2", "a", "alpha", "beta1", "beta2", "beta3", "zeta", "m"},
}


def _num(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(v[0], v[1])
    if isinstance(v, (int, float, complex)) and not isinstance(v, bool):
        return v
    raise DescriptorError(f"expected a number or [re, im], got {v!r}")


def _real_or_complex(v):
    c = _num(v)
    return c.real if isinstance(c, complex) and c.imag == 0 else c


def load(text_or_path):
    """Parse a descriptor (or list of descriptors) from a JSON string or file path."""
    try:
        if isinstance(text_or_path, str) and text_or_path.lstrip()[:1] in ("{", "["):
            return json.loads(text_or_path)
        with open(text_or_path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DescriptorError(f"cannot read descriptor: {exc}") from exc


def build(desc: dict):
    """SolutionField, SuperSoliton or Superpartner for a descriptor."""
    if not isinstance(desc, dict) or "family" not in desc:
        raise DescriptorError("descriptor needs a 'family' key")
    fam = desc["family"]
    if fam not in FAMILIES:
        raise DescriptorError(f"unknown family {fam!r}; choose from {FAMILIES}")
    p = desc.get("params") or {}
    if not isinstance(p, dict):
        raise DescriptorError("'params' must be an object")
    extra = set(p) - _PARAM_KEYS[fam]
    if extra:
        raise DescriptorError(f"unknown parameters for {fam}: {sorted(extra)}; "
                              f"expected some of {sorted(_PARAM_KEYS[fam])}")
    q = NamedFunction.from_dict(desc.get("q", "identity"))
    m = NamedFunction.from_dict(desc.get("m", "zero"))
    red = ReductionSpec(q, m)
    try:
        if fam == "rational_similarity":
            return S.rational_similarity(int(p.get("n", 0)), red)
        if fam == "n_soliton":
            return S.n_soliton([_real_or_complex(k) for k in p.get("kappa", [])], red)
        if fam == "wronskian":
            basis = [S.BasisFunction(b["kind"], _real_or_complex(b.get("gamma", 0.0)),
                                     int(b.get("d_gamma", 0)),
                                     _real_or_complex(b.get("shift", 0.0)))
                     for b in p.get("basis", [])]
            return S.wronskian_solution(basis, red)
        if fam in ("negaton2", "positon2", "rational_soliton", "rational_positon",
                   "complexiton"):
            return S.closed_form(fam, {k: _real_or_complex(v) for k, v in p.items()}, red)
        if fam == "traveling_wave":
            kw = {k: _real_or_complex(p[k]) for k in ("a", "alpha", "c1", "c2") if k in p}
            return S.traveling_wave(m=m, q=q, **kw)
        if fam == "kink":
            return S.kink(_real_or_complex(p.get("a", 1.0)), m)
        if fam == "constant":
            return S.constant(_real_or_complex(p.get("value", 0.0)))
        if fam.startswith("super_soliton"):
            prm = susy.SuperSolitonParams.from_dict(p)
            return susy.super_soliton(int(fam[-1]), prm)
        return susy.superpartner(susy.SuperpartnerParams.from_dict({**p, "m": m.to_dict()}))
    except DescriptorError:
        raise
    except BLMPError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DescriptorError(f"bad parameters for {fam}: {exc}") from exc


def emit(obj) -> dict:
    """Descriptor of a built object; ``build(emit(o))`` reproduces ``o``."""
    d = obj.descriptor()
    if d["family"] == "superpartner":
        prm = dict(d["params"])
        m = prm.pop("m")
        return {"family": "superpartner", "params": prm, "m": m}
    return d


def canonical(desc: dict) -> dict:
    """Descriptor normal form: build then emit."""
    return emit(build(desc))
