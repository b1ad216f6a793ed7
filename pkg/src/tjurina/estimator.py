"""scikit-learn style wrapper: curves in, invariant feature rows out.

Inputs are CurveInput mappings, polynomial strings or :class:`Curve`
objects.  The estimator is stateless apart from its parameters, so
``fit`` only validates; ``transform`` returns one row per curve.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .curve import Curve
from .errors import InputError
from .inputs import build_curve, load_document
from .invariants import compute

__all__ = ["FEATURES", "TjurinaEstimator", "as_curve"]

FEATURES = ("tau", "delta", "r", "theta_sum", "multiplicity")


def as_curve(obj, trunc=None):
    """Curve from a :class:`Curve`, a polynomial string or a CurveInput mapping."""
    if isinstance(obj, Curve):
        return obj
    if isinstance(obj, str):
        obj = {"poly": obj}
    if isinstance(obj, dict):
        doc, opts = load_document(obj)
        return build_curve(doc, trunc if trunc is not None else opts.trunc)
    raise InputError(f"cannot interpret {type(obj).__name__} as a curve")


def _check_inputs(X):
    if isinstance(X, (str, dict, Curve)):
        raise InputError("expected a sequence of curves, got a single curve")
    X = list(X)
    if not X:
        raise InputError("no curves given")
    return X


class TjurinaEstimator(TransformerMixin, BaseEstimator):
    """Feature rows ``(tau, delta, r, sum Theta, multiplicity)`` per curve.

    Parameters
    ----------
    box_slack : int
        Extra room for every value-set window.
    trunc : int or None
        Initial series truncation for implicit input.
    verify : bool
        Run the cross-checks; a failing check raises ``VerificationFailed``.
    """

    def __init__(self, box_slack=0, trunc=None, verify=False):
        self.box_slack = box_slack
        self.trunc = trunc
        self.verify = verify

    def _validate_params(self):
        if not isinstance(self.box_slack, int) or self.box_slack < 0:
            raise ValueError("box_slack must be a nonnegative integer")
        if self.trunc is not None and (not isinstance(self.trunc, int) or self.trunc < 1):
            raise ValueError("trunc must be a positive integer or None")

    def fit(self, X, y=None):
        self._validate_params()
        for obj in _check_inputs(X):
            as_curve(obj, self.trunc)
        self.feature_names_out_ = np.array(FEATURES, dtype=object)
        self.n_features_out_ = len(FEATURES)
        return self

    def report(self, obj):
        from .errors import VerificationFailed

        rep = compute(as_curve(obj, self.trunc), verify=self.verify, slack=self.box_slack)
        bad = [ch for ch in rep.checks if not ch.passed]
        if bad:
            raise VerificationFailed("; ".join(f"{ch.name}: {ch.details}" for ch in bad))
        return rep

    def transform(self, X):
        check_is_fitted(self, "feature_names_out_")
        rows = []
        for obj in _check_inputs(X):
            rep = self.report(obj)
            mult = sum(b.multiplicity for b in rep.branches)
            rows.append((rep.tau, rep.delta, rep.r, sum(rep.theta), mult))
        return np.array(rows, dtype=np.int64)

    def predict(self, X):
        """Tjurina numbers only."""
        return self.transform(X)[:, 0]

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "feature_names_out_")
        return self.feature_names_out_.copy()
