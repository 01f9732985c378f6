import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from ncard import NCAR, NCARD, EpsilonNeighborhoodClustering, KNNGraphClustering
from ncard.harness import gen_blobs
from ncard.metrics import evaluate

ESTIMATORS = [NCARD(), NCAR(), KNNGraphClustering(fraction=0.1), EpsilonNeighborhoodClustering()]


@pytest.fixture(scope="module")
def blobs():
    return gen_blobs(20, 3, 2, 10, 1.0, seed=7)


@pytest.mark.parametrize("est", ESTIMATORS, ids=lambda e: type(e).__name__)
def test_fit_predict(est, blobs):
    labels = clone(est).fit_predict(blobs.points)
    assert labels.shape == (60,)
    assert evaluate(labels, blobs.labels)[1].ri > 0.9


def test_params_roundtrip():
    est = NCARD(p=0.1, n_sigma=3.0)
    assert est.get_params() == {"p": 0.1, "valley_ratio": 0.5, "n_sigma": 3.0}
    est.set_params(p=0.2)
    assert clone(est).p == 0.2


def test_fitted_attributes(blobs):
    est = NCARD().fit(blobs.points)
    assert est.n_clusters_ == 3 and est.outliers_.size == 0 and est.n_features_in_ == 2
    assert len(est.targets_) == 3 and est.neighborhoods_
    eps = EpsilonNeighborhoodClustering().fit(blobs.points)
    assert eps.eps_ > 0


def test_input_validation():
    with pytest.raises(ValueError):
        NCARD().fit(np.array([[0.0, np.nan], [1.0, 1.0]]))
    with pytest.raises(ValueError):
        NCARD().fit(np.array([[0.0, 1.0]]))
    with pytest.raises(NotFittedError):
        NCARD().predict()
