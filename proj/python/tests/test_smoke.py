import numpy as np
import pytest

import idlearn

BOW = {"vars": ["X", "Y"], "directed": [["X", "Y"]], "bidirected": [["X", "Y"]]}
NAPKIN = {
    "vars": ["W", "R", "X", "Y"],
    "directed": [["W", "R"], ["R", "X"], ["X", "Y"]],
    "bidirected": [["X", "W"], ["Y", "W"]],
}
FRONT_DOOR = {
    "vars": ["X", "M", "Y"],
    "directed": [["X", "M"], ["M", "Y"]],
    "bidirected": [["X", "Y"]],
}
DO_X1 = {"intervene": [{"var": "X", "value": 1}]}


def test_identify_front_door():
    est = idlearn.identify(FRONT_DOOR, DO_X1)
    assert est["identifiable"]
    assert est["y"] == ["M", "Y"]
    assert "Σ" in est["formula"]


def test_identify_bow_is_hedge():
    res = idlearn.identify(BOW, DO_X1)
    assert not res["identifiable"]
    assert res["trace"][-1]["step"] == "step5a"


def test_napkin_trace():
    query = {"intervene": [{"var": v, "value": 0} for v in "WRX"], "targets": ["Y"]}
    est = idlearn.identify(NAPKIN, query)
    assert [t["step"] for t in est["trace"]] == ["step5c", "step2", "step5b"]


def test_learn_exact_matches_oracle():
    net = idlearn.random_net(FRONT_DOOR, seed=7)
    model = idlearn.learn_exact(net, DO_X1)
    report = idlearn.verify(model, net)
    assert report["tv"] < 1e-9


def test_learn_from_samples_and_generate():
    net = idlearn.random_net(FRONT_DOOR, seed=11)
    data = idlearn.simulate(net, seed=1, m=50000)
    assert data.shape == (50000, 3)
    model = idlearn.learn(FRONT_DOOR, data, DO_X1)
    assert idlearn.verify(model, net)["tv"] < 0.05

    table = model.table()
    assert sum(table["probs"]) == pytest.approx(1.0, abs=1e-9)
    p = model.eval({"M": 1, "Y": 0})
    assert 0.0 < p < 1.0

    draws = model.sample(seed=3, m=20000)
    assert model.columns == ["M", "Y"]
    freq = np.mean((draws[:, 0] == 1) & (draws[:, 1] == 0))
    assert abs(freq - p) < 0.02


def test_model_round_trip():
    net = idlearn.random_net(FRONT_DOOR, seed=2)
    model = idlearn.learn_exact(net, DO_X1)
    again = idlearn.Model.from_dict(model.to_dict())
    assert again.eval({"M": 0, "Y": 1}) == model.eval({"M": 0, "Y": 1})


def test_errors_are_raised():
    with pytest.raises(idlearn.Error, match="NotIdentifiable"):
        idlearn.learn(BOW, np.zeros((10, 2), dtype=np.int32), DO_X1)
    with pytest.raises(idlearn.Error, match="CycleDetected"):
        idlearn.identify({"vars": ["A", "B"], "directed": [["A", "B"], ["B", "A"]]}, DO_X1)
