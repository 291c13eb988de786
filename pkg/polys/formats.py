"""JSON interchange for polynomials.

    {"n": 2, "basis": "chebyshev", "terms": [{"alpha": [1, 0], "coef": 0.5}, ...]}

``"basis": "monomial"`` is accepted on load and converted, x^alpha becoming
prod_i x_i^{alpha_i} expanded in the Chebyshev basis.
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from numpy.polynomial import chebyshev as C

from polys.chebyshev import ChebPoly1
from polys.multivariate import ChebPolyN, as_multivariate, sum_polys, tensor_polynomial
from utils.errors import PreconditionError


def poly_to_json(p: Union[ChebPoly1, ChebPolyN]) -> Dict[str, Any]:
    p = as_multivariate(p)
    return {
        "n": p.n,
        "basis": "chebyshev",
        "terms": [{"alpha": list(alpha), "coef": coef} for alpha, coef in p.items()],
    }


def _monomial_term(alpha, coef: float, n: int) -> ChebPolyN:
    factors = []
    for k in alpha:
        mono = np.zeros(k + 1)
        mono[k] = 1.0
        factors.append(ChebPoly1(C.poly2cheb(mono)))
    return tensor_polynomial(factors) * coef


def poly_from_json(data: Dict[str, Any]) -> ChebPolyN:
    try:
        n = int(data["n"])
        terms = data["terms"]
    except (KeyError, TypeError, ValueError) as e:
        raise PreconditionError(f"malformed polynomial JSON: {e}")
    basis = data.get("basis", "chebyshev")
    if basis == "chebyshev":
        acc: Dict[tuple, float] = {}
        for t in terms:
            alpha = tuple(t["alpha"])
            acc[alpha] = acc.get(alpha, 0.0) + float(t["coef"])
        return ChebPolyN(n, acc)
    if basis == "monomial":
        for t in terms:
            if len(t["alpha"]) != n:
                raise PreconditionError(f"multi-index {t['alpha']} has wrong length for n={n}")
        return sum_polys((_monomial_term(t["alpha"], float(t["coef"]), n) for t in terms), n)
    raise PreconditionError(f"unknown basis '{basis}'")


def load_polynomial(path: Union[str, Path]) -> ChebPolyN:
    with open(path, 'r', encoding='utf-8') as f:
        return poly_from_json(json.load(f))


def save_polynomial(p: Union[ChebPoly1, ChebPolyN], path: Union[str, Path]):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(poly_to_json(p), f, indent=2)
