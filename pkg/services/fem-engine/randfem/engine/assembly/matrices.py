# randfem - Linear Algebra Containers
# Sparse SPD matrices and coefficient vectors over interior nodes

"""
Containers for the assembled linear systems.

:class:`SparseSpdMatrix` wraps a ``scipy.sparse`` CSR matrix built from
element triplets; duplicate triplets are summed in input order so that the
same triplets always give the same bits. :class:`FemCoefficients` is the
coefficient vector of a function of the P1 space over the interior nodes.
"""

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from randfem.engine.utils.errors import ParameterError

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FemCoefficients:
    """Coefficients v_1..v_{N_h} of v_h = sum_j v_j phi_j."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ParameterError(
                f"coefficients must be a vector, got shape {values.shape}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, dimension: int) -> "FemCoefficients":
        return cls(np.zeros(dimension))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    @property
    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def to_text(self) -> str:
        """One value per line in interior-node order, 17 significant digits."""
        return "".join(f"{value:.17g}\n" for value in self.values)


@dataclass(frozen=True, eq=False)
class SparseSpdMatrix:
    """Symmetric positive (semi)definite sparse matrix in CSR form."""

    csr: sparse.csr_matrix

    @classmethod
    def from_triplets(
        cls, rows: np.ndarray, cols: np.ndarray, values: np.ndarray, dimension: int
    ) -> "SparseSpdMatrix":
        coo = sparse.coo_matrix((values, (rows, cols)), shape=(dimension, dimension))
        csr = coo.tocsr()
        csr.sum_duplicates()
        csr.sort_indices()
        return cls(csr)

    @property
    def dimension(self) -> int:
        return int(self.csr.shape[0])

    @property
    def nnz(self) -> int:
        return int(self.csr.nnz)

    def entry(self, i: int, j: int) -> float:
        return float(self.csr[i, j])

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return self.csr @ np.asarray(v, dtype=float)

    def quadratic_form(self, v: FemCoefficients | np.ndarray) -> float:
        """v^T A v."""
        vec = v.values if isinstance(v, FemCoefficients) else np.asarray(v, dtype=float)
        if vec.shape != (self.dimension,):
            raise ParameterError(
                f"vector of length {vec.shape[0]} does not match "
                f"dimension {self.dimension}"
            )
        return float(vec @ (self.csr @ vec))

    def max_asymmetry(self) -> float:
        """max |A - A^T| over all entries."""
        diff = self.csr - self.csr.T
        return float(abs(diff).max()) if diff.nnz else 0.0

    def is_symmetric(self, tol: float = SYMMETRY_TOL) -> bool:
        return self.max_asymmetry() <= tol

    def to_dense(self) -> np.ndarray:
        return self.csr.toarray()

    def scaled(self, factor: float) -> "SparseSpdMatrix":
        return SparseSpdMatrix((self.csr * factor).tocsr())

    def to_coordinate_text(self) -> str:
        """``row col value`` lines sorted by (row, col), 17 significant digits."""
        coo = self.csr.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return "".join(
            f"{coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}\n" for k in order
        )
