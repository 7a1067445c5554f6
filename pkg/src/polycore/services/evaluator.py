from typing import Callable, List, Optional, Sequence

import sympy

from src.polycore.model import Poly, default_names
from src.utils.exceptions import ArityMismatch

CompiledPolys = Callable[..., List[complex]]


def to_sympy(p: Poly, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    """Exact sympy expression for p; coefficients stay rational."""
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for sym, e in zip(symbols, exps):
            if e:
                term *= sym**e
        expr += term
    return expr


def compile_polys(
    polys: Sequence[Poly], names: Optional[Sequence[str]] = None
) -> CompiledPolys:
    """
    Compile a batch of polynomials into one Python function of the variables
    returning the list of values. The generated body is plain arithmetic, so
    it accepts complex arguments; used by the integrator inner loop.
    """
    if not polys:
        raise ValueError("nothing to compile")
    arity = polys[0].arity
    var_names = list(names) if names is not None else list(default_names(arity))
    if len(var_names) != arity:
        raise ArityMismatch(f"{len(var_names)} names for arity {arity}")
    symbols = [sympy.Symbol(name) for name in var_names]
    exprs = [to_sympy(p, symbols) for p in polys]
    fn: CompiledPolys = sympy.lambdify(symbols, exprs, modules="math", cse=True)
    return fn
