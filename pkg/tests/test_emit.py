import pandas as pd
import pytest

from rrcqkd import emit


@pytest.fixture
def frame():
    return pd.DataFrame(
        {
            "distance_km": [20.0, 50.0],
            "sps": [3, 8],
            "kse_opt": [0.26158123456789012, 1.0 / 3.0],
            "tail": [1e-300, 2.5e-9],
            "flags": ["none", "boundary optimum"],
        }
    )


@pytest.fixture
def config():
    return {"rolloff": 0.25, "sps_list": (2, 3), "out": None, "format": "csv", "tail_tol": 1e-8}


def test_csv_header_echoes_config(frame, config):
    text = emit.render(frame, config, "csv")
    lines = text.splitlines()
    assert lines[:5] == [
        "# format=\"csv\"",
        "# out=null",
        "# rolloff=0.25",
        "# sps_list=[2, 3]",
        "# tail_tol=1e-08",
    ]
    assert lines[5] == "distance_km,sps,kse_opt,tail,flags"


@pytest.mark.parametrize("fmt", emit.FORMATS)
def test_render_and_parse_are_lossless(frame, config, fmt):
    parsed_config, parsed = emit.parse(emit.render(frame, config, fmt), fmt)
    assert parsed_config == {**config, "sps_list": [2, 3]}
    pd.testing.assert_frame_equal(parsed, frame, check_exact=True, check_dtype=False)


def test_csv_and_json_agree(frame, config):
    _, from_csv = emit.parse(emit.render(frame, config, "csv"), "csv")
    _, from_json = emit.parse(emit.render(frame, config, "json"), "json")
    pd.testing.assert_frame_equal(from_csv, from_json, check_exact=True, check_dtype=False)


def test_rendering_is_deterministic(frame, config):
    assert emit.render(frame, config) == emit.render(frame.copy(), dict(reversed(config.items())))


def test_write_to_file(tmp_path, frame, config):
    target = tmp_path / "table.json"
    text = emit.write(frame, config, "json", str(target))
    assert target.read_text(encoding="utf-8") == text


def test_unknown_format(frame, config):
    with pytest.raises(ValueError, match="output format"):
        emit.render(frame, config, "xml")
