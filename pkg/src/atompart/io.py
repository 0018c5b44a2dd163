"""JSON/CSV schemas for models, base measures and experiment configs."""
import json
import math
import os

from .basemeasure import BaseMeasure, WEIGHT_TOL
from .eppf import Gibbs, PitmanYor, VTable
from .errors import InvalidArgument, InvalidModel

SCHEMA = "atompart/1"


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InvalidArgument(f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InvalidArgument(f"{path}: invalid JSON ({exc})")


def model_from_dict(data, base_dir=".", check=True):
    """Parse {"eppf": {"type": "pitman_yor", ...}} or the inner object."""
    entry = data.get("eppf", data) if isinstance(data, dict) else None
    if not isinstance(entry, dict) or "type" not in entry:
        raise InvalidModel('model must look like {"eppf": {"type": ...}}')
    kind = entry["type"]
    try:
        if kind == "pitman_yor":
            return PitmanYor(float(entry["sigma"]), float(entry["theta"]))
        if kind == "gibbs":
            path = entry["v_table_file"]
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            if not os.path.exists(path):
                raise InvalidModel(f"V-table file not found: {path}")
            return Gibbs(float(entry["sigma"]), VTable.from_csv(path), check=check)
    except KeyError as exc:
        raise InvalidModel(f"model is missing field {exc}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidModel):
            raise
        raise InvalidModel(str(exc))
    raise InvalidModel(f"unknown EPPF type {kind!r}")


def load_model(path, check=True):
    return model_from_dict(load_json(path), os.path.dirname(os.path.abspath(path)), check=check)


def model_to_dict(model, v_table_file=None):
    if isinstance(model, PitmanYor):
        return {"eppf": {"type": "pitman_yor", "sigma": model.sigma, "theta": model.theta}}
    if isinstance(model, Gibbs):
        if v_table_file is None:
            raise InvalidArgument("a Gibbs model needs a V-table file name")
        return {"eppf": {"type": "gibbs", "sigma": model.sigma, "v_table_file": v_table_file}}
    raise InvalidArgument(f"{type(model).__name__} has no JSON form")


def base_measure_from_dict(data):
    entry = data.get("base_measure", data) if isinstance(data, dict) else None
    if not isinstance(entry, dict):
        raise InvalidArgument('base measure must look like {"base_measure": {...}}')
    try:
        if "family" in entry:
            fam = entry["family"]
            total = float(entry.get("total_atom_mass", 1.0))
            trunc = int(entry["truncation"])
            if fam == "power_law":
                return BaseMeasure.power_law(float(entry["exponent"]), trunc, total)
            if fam == "geometric":
                return BaseMeasure.geometric(float(entry["ratio"]), trunc, total)
            raise InvalidArgument(f"unknown atom family {fam!r}")
        atoms = [float(x) for x in entry.get("atoms", [])]
        H = BaseMeasure(atoms)
        if "diffuse" in entry:
            diffuse = float(entry["diffuse"])
            if abs(H.a + diffuse - 1) > WEIGHT_TOL:
                raise InvalidArgument(f"atoms ({H.a}) and diffuse mass ({diffuse}) do not sum to 1")
        return H
    except KeyError as exc:
        raise InvalidArgument(f"base measure is missing field {exc}")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InvalidArgument):
            raise
        raise InvalidArgument(str(exc))


def load_base_measure(path):
    return base_measure_from_dict(load_json(path))


def base_measure_to_dict(H):
    if H.family is not None:
        f = H.family
        key = "exponent" if f.kind == "power_law" else "ratio"
        return {"base_measure": {"family": f.kind, key: f.parameter, "truncation": f.truncation,
                                 "total_atom_mass": f.total_atom_mass}}
    return {"base_measure": {"atoms": H.atom_weights.tolist(), "diffuse": H.diffuse_mass}}


def parse_checkpoints(value):
    from .asymptotics import log_checkpoints

    if isinstance(value, dict):
        lo, hi = int(value["from"]), int(value["to"])
        return log_checkpoints(lo, hi, int(value.get("per_decade", 10)))
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    return [int(float(v)) for v in value]


def experiment_from_dict(data, base_dir=".", threads=1):
    from .asymptotics import ExperimentConfig

    if "model" in data:
        model = model_from_dict(data["model"], base_dir)
    else:
        model = model_from_dict(data, base_dir)
    H = base_measure_from_dict(data["base_measure"]) if "base_measure" in data else BaseMeasure.diffuse()
    kwargs = {}
    if "checkpoints" in data:
        kwargs["checkpoints"] = parse_checkpoints(data["checkpoints"])
    for key in ("replicates", "r_max", "seed"):
        if key in data:
            kwargs[key] = int(data[key])
    if "statistics" in data:
        kwargs["statistics"] = tuple(data["statistics"])
    if "slope_range" in data:
        kwargs["slope_range"] = tuple(float(x) for x in data["slope_range"])
    if "tolerances" in data:
        kwargs["tolerances"] = dict(data["tolerances"])
    return ExperimentConfig(model, H, threads=threads, **kwargs)


def load_experiment(path, threads=1):
    return experiment_from_dict(load_json(path), os.path.dirname(os.path.abspath(path)), threads)


def dumps(obj):
    """Compact JSON with non-finite floats written as null."""

    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return x

    return json.dumps(clean(obj))
