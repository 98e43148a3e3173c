"""scikit-learn transformer expanding each input column into q-Jacobi polynomial features."""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import DomainError
from .families import BigParams, LittleParams, big_qjacobi_stable, little_qjacobi_stable
from .orthogonality import norm_big, norm_little
from .qcore import QBase


class QJacobiFeatures(TransformerMixin, BaseEstimator):
    """Map each value ``x`` to ``[P_0(x), ..., P_degree(x)]``.

    Parameters
    ----------
    family : {'little', 'big'}
    degree : int
        Highest polynomial degree; each input column yields ``degree + 1`` outputs.
    q, a, b, c : float
        Family parameters; ``c`` is used only by the big family.
    normalize : bool
        Divide ``P_n`` by the square root of its norm so the features are
        orthonormal under the family's discrete weight.

    The transform is stateless; ``fit`` validates parameters and records the
    input width.
    """

    def __init__(self, family="little", degree=5, q=0.5, a=0.3, b=0.4, c=-0.2, normalize=False):
        self.family = family
        self.degree = degree
        self.q = q
        self.a = a
        self.b = b
        self.c = c
        self.normalize = normalize

    def _params(self):
        if self.family == "little":
            return LittleParams(QBase(self.q), self.a, self.b)
        if self.family == "big":
            return BigParams(QBase(self.q), self.a, self.b, self.c)
        raise DomainError(f"family must be 'little' or 'big', got {self.family!r}")

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if int(self.degree) != self.degree or self.degree < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.degree!r}")
        self.params_ = self._params()
        degrees = range(int(self.degree) + 1)
        if self.normalize:
            norm = norm_little if self.family == "little" else norm_big
            self.scale_ = np.array([1.0 / math.sqrt(norm(n, self.params_)) for n in degrees])
        else:
            self.scale_ = np.ones(int(self.degree) + 1)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        evaluate = little_qjacobi_stable if self.family == "little" else big_qjacobi_stable
        k = int(self.degree) + 1
        out = np.empty((X.shape[0], X.shape[1] * k))
        for j in range(X.shape[1]):
            for i, x in enumerate(X[:, j]):
                out[i, j * k:(j + 1) * k] = [evaluate(n, float(x), self.params_) for n in range(k)]
            out[:, j * k:(j + 1) * k] *= self.scale_
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "params_")
        if input_features is None:
            input_features = [f"x{j}" for j in range(self.n_features_in_)]
        return np.array([f"{name}_p{n}" for name in input_features for n in range(int(self.degree) + 1)],
                        dtype=object)
