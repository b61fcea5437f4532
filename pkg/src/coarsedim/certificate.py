"""Certificates: canonical-word covers that can be re-checked from scratch.

A certificate is sorted-key JSON.  ``digest`` is the sha256 of the compact
canonical encoding of every other field, so any edit to the file shows up
even when the edited cover would still be valid.  Verification rebuilds
the window from the group spec and never reads the stored verdicts.
"""

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import yaml

from .covers import ColoredCover, verify_cover
from .engine import PipelineConfig, quotient_pipeline, run_pipeline
from .errors import InputError, SpecError
from .groups import group_from_spec
from .metric import group_ball

FORMAT_VERSION = 1


@dataclass
class RunConfig:
    """A pipeline run as read from a config file."""

    group: dict
    scale: int
    radius: int
    pipeline: str = None
    padding: float = 1.0
    r_factor: int = 5
    cap: int = 2_000_000
    seed: int = 0
    quotient: dict = None
    label: str = None

    @classmethod
    def from_mapping(cls, data, base_dir="."):
        if not isinstance(data, dict):
            raise InputError("config must be a mapping")
        data = dict(data)
        if "group_file" in data:
            path = os.path.join(base_dir, data.pop("group_file"))
            with open(path) as fh:
                data["group"] = yaml.safe_load(fh)
        if "d" in data and "scale" not in data:
            data["scale"] = data.pop("d")
        known = set(cls.__dataclass_fields__)
        extra = sorted(set(data) - known)
        if extra:
            raise InputError(f"unknown config keys: {', '.join(extra)}")
        for key in ("group", "scale", "radius"):
            if key not in data:
                raise InputError(f"config is missing {key!r}")
        cfg = cls(**data)
        for key in ("scale", "radius", "r_factor", "cap", "seed"):
            val = getattr(cfg, key)
            if isinstance(val, bool) or not isinstance(val, int):
                raise InputError(f"config key {key!r} must be an integer")
        if (cfg.pipeline == "quotient") != (cfg.quotient is not None):
            raise InputError("the quotient pipeline needs a 'quotient' block and only it uses one")
        return cfg

    @classmethod
    def load(cls, path):
        try:
            with open(path) as fh:
                data = yaml.safe_load(fh)
        except OSError as exc:
            raise InputError(f"cannot read config: {exc}") from None
        except yaml.YAMLError as exc:
            raise InputError(f"config is not valid YAML: {exc}") from None
        return cls.from_mapping(data, os.path.dirname(os.path.abspath(path)))

    def pipeline_config(self):
        return PipelineConfig(self.group, self.scale, self.radius, pipeline=self.pipeline,
                              r_factor=self.r_factor, padding=self.padding, cap=self.cap,
                              seed=self.seed)

    def outer_radius(self):
        return max(self.radius, math.ceil(self.radius * self.padding))


def execute(cfg):
    """Run the configured pipeline and return ``(certificate dict, result)``."""
    G = group_from_spec(cfg.group)
    pc = cfg.pipeline_config()
    pc.spec = G
    if cfg.pipeline == "quotient":
        q = cfg.quotient
        if not isinstance(q, dict) or "target" not in q or "images" not in q:
            raise InputError("quotient block needs 'target' and 'images'")
        result = quotient_pipeline(pc, group_from_spec(q["target"]), q["images"])
    else:
        result = run_pipeline(pc)
    return build_certificate(cfg, G, result), result


def build_certificate(cfg, G, result):
    cover = result.cover
    report = result.report
    params = dict(result.params)
    params["bound"] = cover.bound
    params["cap"] = cfg.cap
    params["padding"] = cfg.padding
    if getattr(G, "factors", None) and len(G.factors) > 2 and G.kind == "amalgam":
        params["note"] = ("several factors over a common subgroup: hypothesis checks follow "
                          "the two-factor scheme")
    fams = [[sorted((G.fmt(g) for g in s), key=_word_key) for s in fam]
            for fam in cover.sorted_families()]
    cert = {
        "format_version": FORMAT_VERSION,
        "label": cfg.label,
        "group": G.to_spec(),
        "quotient": _quotient_echo(cfg),
        "pipeline": params["pipeline"],
        "params": params,
        "window": {"inner_radius": cfg.radius, "outer_radius": cfg.outer_radius(),
                   "points": len(cover.window.points), "region": len(result.region)},
        "families": fams,
        "checks": _jsonable(result.checks),
        "verdicts": _verdicts(report, result.checks),
    }
    cert["digest"] = digest(cert)
    return cert


def _quotient_echo(cfg):
    if cfg.quotient is None:
        return None
    target = group_from_spec(cfg.quotient["target"])
    return {"target": target.to_spec(), "images": dict(sorted(cfg.quotient["images"].items()))}


def _word_key(w):
    n = 0 if w == "e" else len(w.split())
    return n, w


def _verdicts(report, checks=()):
    return {
        "disjoint": [v is None for v in report.disjoint],
        "covered": report.covered,
        "max_diameter": report.max_diameter,
        "diameter_exact": report.diameter_exact,
        "bound": report.bound,
        "within_bound": report.bound is None or report.max_diameter <= report.bound,
        "checks_passed": all(c.get("passed", True) for c in checks if isinstance(c, dict)),
        "passed": report.passed,
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(v) for v in obj), key=repr)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


def canonical_bytes(cert):
    body = {k: v for k, v in cert.items() if k != "digest"}
    return json.dumps(body, sort_keys=True, separators=(",", ":")).encode()


def digest(cert):
    return hashlib.sha256(canonical_bytes(cert)).hexdigest()


def dumps(cert):
    return json.dumps(cert, sort_keys=True, indent=1) + "\n"


def write_atomic(path, text):
    """Write via a temp file in the target directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read certificate: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"certificate is not valid JSON: {exc}") from None


@dataclass
class VerifyResult:
    passed: bool
    problems: list = field(default_factory=list)
    verdicts: dict = None
    stored_verdicts_agree: bool = None


def verify_certificate(cert):
    """Re-check a certificate from its words and a regenerated window."""
    problems = []
    for key in ("format_version", "group", "params", "window", "families", "digest"):
        if key not in cert:
            raise InputError(f"certificate is missing {key!r}")
    if cert["format_version"] != FORMAT_VERSION:
        raise InputError(f"unsupported certificate format {cert['format_version']!r}")
    if digest(cert) != cert["digest"]:
        problems.append("digest mismatch: the certificate was edited after it was written")
    G = group_from_spec(cert["group"])
    if G.to_spec() != cert["group"]:
        raise SpecError("group spec does not round-trip to the stored echo", stage="verify:spec")
    params, window = cert["params"], cert["window"]
    inner, outer = window["inner_radius"], window["outer_radius"]
    win = group_ball(G, outer, cap=params.get("cap"))
    region = frozenset(p for p in win.points if G.norm(p) <= inner)
    fams = []
    seen = {}
    for i, fam in enumerate(cert["families"]):
        sets = []
        for j, words in enumerate(fam):
            s = set()
            for w in words:
                try:
                    g = G.parse(w)
                except InputError as exc:
                    problems.append(f"family {i} set {j}: {w!r} is not a word: {exc}")
                    continue
                if G.fmt(g) != w:
                    problems.append(f"family {i} set {j}: {w!r} is not in canonical form")
                if g not in win:
                    problems.append(f"family {i} set {j}: {w!r} lies outside the window")
                    continue
                if g in s:
                    problems.append(f"family {i} set {j}: {w!r} is listed twice")
                seen.setdefault(g, []).append((i, j))
                s.add(g)
            sets.append(s)
        fams.append(sets)
    for g, places in seen.items():
        colors = [i for i, _ in places]
        if len(set(colors)) < len(colors):
            problems.append(f"{G.fmt(g)!r} appears in two sets of one family: {places}")
    cover = ColoredCover(fams, params["d"], win, bound=params.get("bound"))
    report = verify_cover(cover, region=region)
    verdicts = _verdicts(report)
    for i, v in enumerate(report.disjoint):
        if v is not None:
            p, q = (G.fmt(x) for x in v.points)
            problems.append(f"family {i} is not {report.scale}-disjoint: {p!r} and {q!r} "
                            f"lie in different sets at distance {G.dist(*v.points)}")
    if report.missed is not None:
        problems.append(f"point {G.fmt(report.missed)!r} of the inner window is not covered")
    if not verdicts["within_bound"]:
        problems.append(f"a set has diameter {report.max_diameter} above the bound {report.bound}")
    if report.colors != params.get("colors", report.colors):
        problems.append(f"{report.colors} families but params claim {params['colors']}")
    stored = cert.get("verdicts") or {}
    agree = all(stored.get(k) == verdicts[k] for k in ("disjoint", "covered", "max_diameter",
                                                          "within_bound"))
    return VerifyResult(not problems, problems, verdicts, agree)
