from typing import List, Sequence

from src.polycore.model import Matrix, Poly, PolyMap
from src.utils.exceptions import ArityMismatch, IndexOutOfRange, NotSquare, TooLarge
from src.utils.logger import logger

log = logger(__name__)

# Laplace expansion is exact but factorial in n
MAX_DET_SIZE = 4


def _check_square(matrix: Sequence[Sequence[Poly]]) -> int:
    n = len(matrix)
    if n == 0 or any(len(row) != n for row in matrix):
        raise NotSquare(
            f"expected a square matrix, got row lengths {[len(r) for r in matrix]}"
        )
    return n


class JacobianService:
    """Jacobians, determinants, signed minors and the Keller test."""

    def jacobian(self, f: PolyMap) -> Matrix:
        """Entry (i, j) is the partial derivative of f_i with respect to x_j."""
        return [[fi.partial(j) for j in range(f.arity)] for fi in f.components]

    def det(self, matrix: Sequence[Sequence[Poly]]) -> Poly:
        n = _check_square(matrix)
        if n > MAX_DET_SIZE:
            raise TooLarge(f"determinant of a {n}x{n} matrix exceeds {MAX_DET_SIZE}")
        return self._laplace([list(row) for row in matrix])

    def _laplace(self, matrix: List[List[Poly]]) -> Poly:
        n = len(matrix)
        if n == 1:
            return matrix[0][0]
        if n == 2:
            return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
        total = Poly.zero(matrix[0][0].arity)
        for col, entry in enumerate(matrix[0]):
            if entry.is_zero():
                continue
            minor = [row[:col] + row[col + 1 :] for row in matrix[1:]]
            term = entry * self._laplace(minor)
            total = total - term if col % 2 else total + term
        return total

    def signed_minor(self, matrix: Sequence[Sequence[Poly]], row: int, col: int) -> Poly:
        """
        Cofactor (-1)^(row+col) * det(matrix without `row` and `col`).

        With row = d this is the d-th cofactor row, so the velocity field
        dx_j/dr = signed_minor(J, d, j) drives f_d at rate |J| and leaves the
        other components fixed.
        """
        n = _check_square(matrix)
        if not (0 <= row < n and 0 <= col < n):
            raise IndexOutOfRange(f"({row}, {col}) outside a {n}x{n} matrix")
        if n - 1 > MAX_DET_SIZE:
            raise TooLarge(f"minor of a {n}x{n} matrix exceeds {MAX_DET_SIZE}")
        if n == 1:
            return Poly.constant(matrix[0][0].arity, 1)
        minor = [
            [entry for j, entry in enumerate(r) if j != col]
            for i, r in enumerate(matrix)
            if i != row
        ]
        value = self._laplace(minor)
        return -value if (row + col) % 2 else value

    def jacobian_determinant(self, f: PolyMap) -> Poly:
        return self.det(self.jacobian(f))

    def is_keller(self, f: PolyMap) -> bool:
        jdet = self.jacobian_determinant(f)
        keller = jdet == 1
        log.debug(f"|J| of {f} = {jdet}; Keller: {keller}")
        return keller

    def compose(self, f: PolyMap, g: PolyMap) -> PolyMap:
        """The map f o g, i.e. x -> f(g(x))."""
        if f.arity != g.arity:
            raise ArityMismatch(f"cannot compose arity {f.arity} with arity {g.arity}")
        return PolyMap([fi.substitute(g.components) for fi in f.components], g.names)


# Singleton instance
jacobian_service = JacobianService()
