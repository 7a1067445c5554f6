"""Built-in maps, u-gamma representations and experiment setups."""

from fractions import Fraction
from typing import Any, Dict, Tuple

from src.polycore.model import Poly, PolyMap
from src.polycore.services.jacobian_service import jacobian_service
from src.uvrep.model import UVRep


def _plane() -> Tuple[Poly, Poly]:
    return Poly.variable(2, 0), Poly.variable(2, 1)


def _f0() -> PolyMap:
    x1, x2 = _plane()
    return PolyMap([x1 * x2, x1 * x2 + x2**2])


def _g0() -> PolyMap:
    z1, z2 = _plane()
    return PolyMap([z1, z2 + z1**2], ("z1", "z2"))


def _f1() -> PolyMap:
    x1, x2 = _plane()
    outer = PolyMap([x1 * x2 + x2**2, x1 * x2])
    composed = jacobian_service.compose(outer, _g0())
    return PolyMap(list(composed.components), ("z1", "z2"))


def _n3_triangular() -> PolyMap:
    x1, x2, x3 = (Poly.variable(3, i) for i in range(3))
    return PolyMap([x1 + x2**2, x2 + x3**2, x3])


def builtin_maps() -> Dict[str, PolyMap]:
    f0 = _f0()
    return {
        "f0": f0,
        "f0-sqrt": f0,
        "f1": _f1(),
        "g0": _g0(),
        "n3-triangular": _n3_triangular(),
    }


def builtin_reps() -> Dict[str, UVRep]:
    zero = Fraction(0)
    return {
        # x1 = u, x2 = gamma/u
        "f0": UVRep(m=1, N=2, h=(zero, zero)),
        # x1 = v^2, x2 = gamma/v^2
        "f0-sqrt": UVRep(m=2, N=4, h=(zero,) * 4),
        # z2 = -v^2, z1 = v + gamma/v^2
        "f1": UVRep(m=2, N=4, h=(zero, Fraction(1), zero, zero), role=(1, 0), sign=-1),
    }


# Experiment configs in wire form; driven_index is 1-based here
BUILTIN_EXPERIMENTS: Dict[str, Dict[str, Any]] = {
    "f0-basic": {
        "name": "f0-basic",
        "map": "f0",
        "rep": "f0",
        "driven_index": 1,
        "step": 1e-5,
        "max_steps": 800_000,
        "record_stride": 10_000,
        "x0": [-7.0, 3.0],
    },
    "f0-sqrt-plus": {
        "name": "f0-sqrt-plus",
        "map": "f0-sqrt",
        "rep": "f0-sqrt",
        "driven_index": 1,
        "step": 1e-6,
        "max_steps": 10,
        "record_stride": 1,
        "x0": [9.0, 3.0],
        "initial_branch": 3.0,
    },
    "f0-sqrt-minus": {
        "name": "f0-sqrt-minus",
        "map": "f0-sqrt",
        "rep": "f0-sqrt",
        "driven_index": 1,
        "step": 1e-5,
        "max_steps": 10,
        "record_stride": 1,
        "x0": [9.0, 3.0],
        "initial_branch": -3.0,
    },
    "f0-sqrt-fine": {
        "name": "f0-sqrt-fine",
        "map": "f0-sqrt",
        "rep": "f0-sqrt",
        "driven_index": 1,
        "step": 1e-7,
        "max_steps": 10,
        "record_stride": 1,
        "x0": [9.0, 3.0],
        "initial_branch": 3.0,
    },
    "f1-long": {
        "name": "f1-long",
        "map": "f1",
        "rep": "f1",
        "driven_index": 1,
        "step": 1e-7,
        "max_steps": 21_000_000,
        "record_stride": 1_000_000,
        "x0": [5.0, -11.0],
        "initial_branch": 3.0,
    },
    "g0-keller": {
        "name": "g0-keller",
        "map": "g0",
        "driven_index": 1,
        "step": 1e-5,
        "max_steps": 100_000,
        "record_stride": 10_000,
        "x0": [1.0, 1.0],
    },
    "n3-triangular": {
        "name": "n3-triangular",
        "map": "n3-triangular",
        "driven_index": 1,
        "step": 1e-5,
        "max_steps": 100_000,
        "record_stride": 10_000,
        "x0": [1.0, 1.0, 1.0],
    },
}

# Verification fixtures beyond the registry maps: perturbed negative controls
# and single-term expansions with forced indices
BUILTIN_FIXTURES: Dict[str, Dict[str, Any]] = {
    "f0-perturbed": {
        "map": "f0",
        "rep": "f0",
        "perturbation": [{"component": "b", "coeff": "1", "gamma_power": 1, "u_power": -1}],
    },
    "f1-perturbed": {
        "map": "f1",
        "rep": "f1",
        "perturbation": [{"component": "b", "coeff": "1", "gamma_power": 1, "u_power": -1}],
    },
    # a = gamma, b = gamma + 1/u on m=1, N=3: k = 1 = N - 2m, bracket m/k = 1
    "synthetic-theorem-k": {
        "map": {"arity": 2, "components": [[], []]},
        "rep": {"m": 1, "N": 3, "h": ["0", "0", "0"]},
        "assume_keller": True,
        "perturbation": [
            {"component": "a", "coeff": "1", "gamma_power": 1, "u_power": 0},
            {"component": "b", "coeff": "1", "gamma_power": 1, "u_power": 0},
            {"component": "b", "coeff": "1", "gamma_power": 0, "u_power": -1},
        ],
    },
    # b = gamma/u on m=2, N=5: K = 1 and sigma(psi1) = -psi1
    "synthetic-galois-k1": {
        "map": {"arity": 2, "components": [[], []]},
        "rep": {"m": 2, "N": 5, "h": ["0", "0", "0", "0", "0"]},
        "perturbation": [{"component": "b", "coeff": "1", "gamma_power": 1, "u_power": -1}],
    },
}
