from dioexp.manifest import ExperimentManifest


def _m(**kw):
    base = dict(command=["flow"], inputs={"vector": ["phi"]}, bounds={"T": 20.0}, seed=None, precision=128)
    base.update(kw)
    return ExperimentManifest(**base)


def test_digest_ignores_outputs():
    a = _m()
    b = _m(outputs={"trace.csv": "trace.csv"})
    assert a.digest() == b.digest() and a.id == b.id


def test_digest_tracks_inputs_and_bounds():
    assert _m().digest() != _m(bounds={"T": 21.0}).digest()
    assert _m().digest() != _m(inputs={"vector": ["sqrt:2"]}).digest()
    assert _m().digest() != _m(seed=1).digest()


def test_json_round_trip(tmp_path):
    m = _m(outputs={"report.json": "report.json"})
    path = m.save(tmp_path / "manifest.json")
    back = ExperimentManifest.from_json(path.read_text())
    assert back == m and back.to_json() == m.to_json()
