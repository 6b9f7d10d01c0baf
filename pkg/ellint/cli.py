"""
Command line interface.

Every subcommand writes one artifact (JSON by default, CSV where tabular) to
``--output`` or standard output, and echoes the resolved parameters under
``"params"``. Exit status is 0 on success, 2 on invalid input and 3 when a
numerical procedure fails.
"""
import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ellint._base import _jsonable
from ellint.engine import (
    QuadratureControl,
    anomaly_check,
    graph_integral,
    modularity_check,
)
from ellint.exceptions import NumericalError, ValidationError
from ellint.graphs import parse_graph_file
from ellint.modular import ModularGroupElement, ModularPoint
from ellint.polynomials import (
    a_constant,
    cuts,
    kirchhoff_det,
    spanning_trees,
    tree_polynomial,
)
from ellint.propagator import (
    E2_STAR_CANDIDATES,
    RegularizationWindow,
    e2_star_coefficient,
    poisson_theta_check,
    self_loop_value,
    transform_check,
)

logger = logging.getLogger(__name__)

COMMANDS = (
    "eval",
    "polys",
    "selfloop",
    "a-const",
    "check-modularity",
    "check-anomaly",
    "scan",
    "check-transform",
    "check-poisson",
    "calibrate",
)
FORMATS = ("json", "csv")
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def parse_complex(text: str) -> complex:
    """
    Parse ``a+bi`` style literals; spaces are ignored and ``i`` stands for 1i.

    Examples
    --------
    >>> parse_complex("0.2 + 1.1i")
    (0.2+1.1j)
    >>> parse_complex("i")
    1j
    """
    cleaned = str(text).replace(" ", "").lower().replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise ValidationError(f"cannot parse complex number {text!r}") from None


def parse_range(text: str) -> np.ndarray:
    """``a:b:n`` for n evenly spaced values from a to b, or a single value."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            n = int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(float(parts[0]), float(parts[1]), n)
    except ValueError:
        pass
    raise ValidationError(f"expected a value or a:b:n range, got {text!r}")


def parse_floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"expected comma separated numbers, got {text!r}") from None


def parse_ints(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"expected comma separated integers, got {text!r}") from None


@dataclass
class RunConfig:
    """
    One resolved invocation of the command line interface.

    Fields left at None fall back to the library defaults.
    """

    command: str
    graph_path: Optional[str] = None
    tau: complex = 1j
    gamma: Optional[Tuple[int, int, int, int]] = None
    method: str = "regulated"
    eps_schedule: Optional[Tuple[float, ...]] = None
    L: Optional[float] = None
    grid: Optional[int] = None
    excision: Optional[float] = None
    tol: Optional[float] = None
    h: Optional[float] = None
    n: int = 0
    n0: int = 0
    ns: Tuple[int, ...] = ()
    re: str = "0"
    im: str = "1"
    z: complex = 0.3 + 0.2j
    a: float = 0.3
    eps: float = 1e-3
    output: Optional[str] = None
    format: str = "json"
    n_jobs: Optional[int] = None
    verbose: bool = False
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ValidationError(f"format must be one of {FORMATS}, got {self.format!r}")
        ModularPoint.from_complex(self.tau)
        if self.gamma is not None:
            ModularGroupElement(*self.gamma)

    def quadrature_control(self) -> QuadratureControl:
        overrides = {
            "method": self.method,
            "eps_schedule": self.eps_schedule,
            "L": self.L,
            "grid_per_dim": self.grid,
            "excision_radius": self.excision,
            "tol": self.tol,
            "n_jobs": self.n_jobs,
            "verbose": self.verbose,
        }
        ctl = QuadratureControl().set_params(
            **{k: v for k, v in overrides.items() if v is not None}
        )
        ctl._check_params()
        return ctl

    def gamma_element(self) -> ModularGroupElement:
        if self.gamma is None:
            raise ValidationError(f"{self.command} needs --gamma A,B,C,D")
        return ModularGroupElement(*self.gamma)

    def graph(self):
        if self.graph_path is None:
            raise ValidationError(f"{self.command} needs --graph")
        return parse_graph_file(self.graph_path)

    def echo(self) -> Dict[str, Any]:
        record = {
            key: _jsonable(value)
            for key, value in vars(self).items()
            if key not in ("extra", "tau", "z")
        }
        record["tau"] = {"re": self.tau.real, "im": self.tau.imag}
        record["z"] = {"re": self.z.real, "im": self.z.imag}
        return record


def _pair(z: complex) -> Dict[str, float]:
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def _eval(config: RunConfig):
    result = graph_integral(config.graph(), config.tau, config.quadrature_control())
    if config.format == "csv":
        return pd.DataFrame(
            [{"x": config.tau.real, "y": config.tau.imag, "re": result.value.real,
              "im": result.value.imag, "err": result.err}]
        ), result.params
    return result.to_dict(), result.params


def _polys(config: RunConfig):
    g = config.graph()
    t = np.ones(g.n_edges) if config.extra.get("t") is None else np.asarray(config.extra["t"])
    first, last = g.vertices[0], g.vertices[-1]
    record = {
        "det": kirchhoff_det(g, t),
        "tree_polynomial": tree_polynomial(g, t),
        "trees": [list(tree) for tree in spanning_trees(g)],
        "cuts": [
            {
                "edges": list(c.edges),
                "side1": sorted(c.side1, key=g.vertex_index),
                "side2": sorted(c.side2, key=g.vertex_index),
            }
            for c in cuts(g, [first], [last])
        ],
        "t": t.tolist(),
        "base": last,
    }
    return record, {}


def _selfloop(config: RunConfig):
    value = self_loop_value(config.n, config.tau)
    return {"value": _pair(value), "err": 0.0, "n": config.n}, {}


def _a_const(config: RunConfig):
    constant = a_constant(config.n0, config.ns)
    return {"value": str(constant), "float": float(constant), "exact": constant.exact}, {}


def _check_modularity(config: RunConfig):
    result = modularity_check(
        config.graph(), config.tau, config.gamma_element(), config.quadrature_control()
    )
    return result.to_dict(), result.params


def _check_anomaly(config: RunConfig):
    result = anomaly_check(config.graph(), config.tau, config.quadrature_control(), config.h)
    return result.to_dict(), result.params


def _scan(config: RunConfig):
    g = config.graph()
    ctl = config.quadrature_control()
    grid = [(x, y) for x in parse_range(config.re) for y in parse_range(config.im)]
    rows, params = [], {}
    for x, y in tqdm(grid, desc="tau grid", disable=not config.verbose):
        result = graph_integral(g, complex(x, y), ctl)
        params = result.params
        rows.append(
            {"x": x, "y": y, "re": result.value.real, "im": result.value.imag, "err": result.err}
        )
    frame = pd.DataFrame(rows, columns=["x", "y", "re", "im", "err"])
    params = {key: value for key, value in params.items() if key != "tau"}
    if config.format == "csv":
        return frame, params
    return {"rows": frame.to_dict(orient="records")}, params


def _check_transform(config: RunConfig):
    window = RegularizationWindow(config.eps, config.L if config.L is not None else 10.0)
    residual = transform_check(config.z, config.tau, config.gamma_element(), window, config.n)
    return {"residual": residual, "window": {"eps": window.eps, "L": window.L}}, {}


def _check_poisson(config: RunConfig):
    L = config.L if config.L is not None else 1.0
    return {"residual": poisson_theta_check(config.a, L), "a": config.a, "L": L}, {}


def _calibrate(config: RunConfig):
    value = e2_star_coefficient()
    name = next(k for k, v in E2_STAR_CANDIDATES.items() if v == value)
    return {"c_star": value, "candidate": name}, {}


HANDLERS = {
    "eval": _eval,
    "polys": _polys,
    "selfloop": _selfloop,
    "a-const": _a_const,
    "check-modularity": _check_modularity,
    "check-anomaly": _check_anomaly,
    "scan": _scan,
    "check-transform": _check_transform,
    "check-poisson": _check_poisson,
    "calibrate": _calibrate,
}


def _write(config: RunConfig, artifact, params: Dict[str, Any]):
    params = {"run": config.echo(), **params}
    logger.info("resolved parameters: %s", json.dumps(params))
    if config.format == "csv":
        if not isinstance(artifact, pd.DataFrame):
            artifact = pd.json_normalize(
                {key: value for key, value in artifact.items() if key != "params"}, sep="_"
            )
        text = artifact.to_csv(index=False)
        if config.output is not None:
            Path(str(config.output) + ".params.json").write_text(
                json.dumps(params, indent=2) + "\n"
            )
        else:
            print(json.dumps(params), file=sys.stderr)
    else:
        text = json.dumps({**artifact, "params": params}, indent=2) + "\n"
    if config.output is None:
        sys.stdout.write(text)
    else:
        Path(config.output).write_text(text)


def run(config: RunConfig) -> int:
    """
    Execute one command and write its artifact.

    Returns
    -------
    status : int
        0 on success, 2 on a validation error, 3 on a numerical failure.
    """
    try:
        artifact, params = HANDLERS[config.command](config)
        _write(config, artifact, params)
    except ValidationError as exc:
        print(f"ellint {config.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"ellint {config.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellint", description="Feynman graph integrals on elliptic curves."
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG and show progress.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, graph=False, tau=True, quadrature=False, output_format=True):
        p = sub.add_parser(name, help=help_text)
        if graph:
            p.add_argument("--graph", dest="graph_path", required=True, help="Graph JSON file.")
        if tau:
            p.add_argument(
                "--tau", default="i", help="Point of the upper half-plane, e.g. 0.2+1.1i."
            )
        if quadrature:
            p.add_argument("--method", choices=("regulated", "excised"), default="regulated")
            p.add_argument("--eps-schedule", dest="eps_schedule", default=None,
                           help="Comma separated, strictly decreasing.")
            p.add_argument("--L", type=float, default=None, help="Upper Schwinger cutoff.")
            p.add_argument("--grid", type=int, default=None, help="Nodes per dimension (excised).")
            p.add_argument("--excision", type=float, default=None, help="Excision radius.")
            p.add_argument("--tol", type=float, default=None, help="Truncation tolerance.")
            p.add_argument("--n-jobs", dest="n_jobs", type=int, default=None)
        p.add_argument("--output", default=None, help="Output file, standard output if omitted.")
        if output_format:
            p.add_argument("--format", choices=FORMATS, default="json")
        return p

    add("eval", "Evaluate a graph integral.", graph=True, quadrature=True)
    p = add("polys", "Kirchhoff determinant, spanning trees and cuts.", graph=True, tau=False)
    p.add_argument("--t", default=None, help="Comma separated Schwinger times, all 1 if omitted.")
    p = add("selfloop", "Closed value of a decorated self-loop.")
    p.add_argument("--n", type=int, default=0, help="Decoration of the self-loop.")
    p = add("a-const", "Rational collapse constant A(n0; ns).", tau=False)
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--ns", default="", help="Comma separated decorations.")
    p = add("check-modularity", "Weight of W under SL(2,Z).", graph=True, quadrature=True)
    p.add_argument("--gamma", required=True, help="A,B,C,D with AD - BC = 1.")
    p = add("check-anomaly", "The d/dtau-bar recursion.", graph=True, quadrature=True)
    p.add_argument("--h", type=float, default=None, help="Finite difference step.")
    p = add("scan", "W over a grid of tau.", graph=True, tau=False, quadrature=True)
    p.add_argument("--re", default="0", help="Re tau, a value or a:b:n.")
    p.add_argument("--im", default="1", help="Im tau, a value or a:b:n.")
    p = add("check-transform", "SL(2,Z) law of the regulated propagator.")
    p.add_argument("--gamma", required=True, help="A,B,C,D with AD - BC = 1.")
    p.add_argument("--z", default="0.3+0.2i")
    p.add_argument("--n", type=int, default=0, help="Number of derivatives.")
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--L", type=float, default=None)
    p = add("check-poisson", "Poisson summation of the one-dimensional theta function.", tau=False)
    p.add_argument("--a", type=float, default=0.3)
    p.add_argument("--L", type=float, default=None)
    add("calibrate", "Fit the E2* coefficient of the propagator limit.", tau=False)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    extra = {}
    if "tau" in args:
        args["tau"] = parse_complex(args["tau"])
    if "z" in args:
        args["z"] = parse_complex(args["z"])
    if args.get("gamma") is not None:
        gamma = parse_ints(args["gamma"])
        if len(gamma) != 4:
            raise ValidationError(f"--gamma needs four integers, got {args['gamma']!r}")
        args["gamma"] = gamma
    if args.get("eps_schedule") is not None:
        args["eps_schedule"] = parse_floats(args["eps_schedule"])
    if "ns" in args:
        args["ns"] = parse_ints(args["ns"])
    if "t" in args:
        t = args.pop("t")
        extra["t"] = None if t is None else parse_floats(t)
    return RunConfig(**args, extra=extra)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"ellint: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
