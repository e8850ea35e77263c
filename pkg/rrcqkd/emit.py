"""
CSV / JSON output of result records.

Both formats carry the resolved configuration: CSV as leading ``# key=value``
comment lines (values JSON-encoded), JSON as ``{"config": ..., "records": ...}``.
"""

import io
import json
import logging
import math

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
FORMATS = ("csv", "json")


def _plain(value):
    """numpy scalars and tuples to JSON-ready builtins."""
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(value)
    return value


def _json_float(value):
    # 17 significant digits reproduce every double exactly.
    return float(f"{value:.17g}")


def render(frame: pd.DataFrame, config: dict, fmt: str = "csv") -> str:
    if fmt not in FORMATS:
        raise ValueError(f"output format must be one of {FORMATS}, got {fmt!r}")
    config = {key: _plain(config[key]) for key in sorted(config)}

    if fmt == "csv":
        buffer = io.StringIO()
        for key, value in config.items():
            buffer.write(f"# {key}={json.dumps(value)}\n")
        frame.to_csv(buffer, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return buffer.getvalue()

    records = []
    for row in frame.to_dict(orient="records"):
        clean = {key: _plain(value) for key, value in row.items()}
        records.append(
            {key: _json_float(v) if isinstance(v, float) else v for key, v in clean.items()}
        )
    return json.dumps({"config": config, "records": records}, indent=2) + "\n"


def write(frame: pd.DataFrame, config: dict, fmt: str = "csv", out=None) -> str:
    """Render and write to ``out`` (a path) or return the text for stdout."""
    text = render(frame, config, fmt)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("Wrote %s records to %s", len(frame), out)
    return text


def parse(text: str, fmt: str = "csv") -> tuple[dict, pd.DataFrame]:
    """Inverse of :func:`render`."""
    if fmt == "json":
        payload = json.loads(text)
        return payload["config"], pd.DataFrame.from_records(payload["records"])

    config = {}
    for line in text.splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition("=")
        config[key] = json.loads(value)
    frame = pd.read_csv(io.StringIO(text), comment="#", float_precision="round_trip")
    return config, frame
