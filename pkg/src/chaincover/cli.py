"""Command-line surface.

Exit codes: 0 success, 1 bad input, 2 violated invariant/assertion.
CHAINCOVER_SEED supplies the default seed where one applies.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction

import click

from . import experiments as xp
from .chain import nested_chain
from .compress import select
from .conformal import (
    LabeledPair,
    calibrate,
    fixed_context_fit,
)
from .hypergraph import InputError, InvariantError, WeightedHypergraph, as_fraction
from .io import (
    canonical_json,
    load_chain,
    load_instance,
    result_csv,
    save_chain,
)

_ENV_SEED = "CHAINCOVER_SEED"


def _default_seed() -> int:
    raw = os.environ.get(_ENV_SEED, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{_ENV_SEED} must be an integer, got {raw!r}") from None


def _fractions_csv(text: str) -> list[Fraction]:
    try:
        return [as_fraction(part.strip()) for part in text.split(",") if part.strip()]
    except (ValueError, InputError) as exc:
        raise InputError(f"bad rational list {text!r}: {exc}") from None


def _ints_csv(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}: {exc}") from None


@click.group()
def cli() -> None:
    """Nested-chain subgraph compression toolkit."""


@cli.command("chain")
@click.argument("instance", type=click.Path(exists=False))
@click.argument("out", type=click.Path())
@click.option("--route", default="auto", show_default=True,
              type=click.Choice(["auto", "scipy", "dinic"]), help="max-flow route")
def cmd_chain(instance: str, out: str, route: str) -> None:
    """Write the full nested chain of INSTANCE to OUT."""
    h, _ = load_instance(instance)
    chain = nested_chain(h, method=route)
    save_chain(out, chain)
    click.echo(f"{len(chain.sets)} sets, {len(chain.breakpoints)} breakpoints -> {out}")


@cli.command("compress")
@click.argument("source", type=click.Path())
@click.option("--tau", required=True, help="coverage target in [0, 1]")
@click.option("--kappa", default="1", show_default=True, help="slack parameter > 0")
def cmd_compress(source: str, tau: str, kappa: str) -> None:
    """Select a vertex set from SOURCE (an instance or a saved chain)."""
    doc = _peek_json(source)
    if "sets" in doc:
        chain = load_chain(source)
    else:
        h, _ = load_instance(source)
        chain = nested_chain(h)
    sel = select(chain, as_fraction(tau), as_fraction(kappa))
    report = {
        "vertices": sorted(sel.vertex_set),
        "size": len(sel.vertex_set),
        "residual": str(sel.residual),
        "residual_bound": str(sel.bound),
        "certified": sel.residual <= sel.bound,
    }
    click.echo(canonical_json(report), nl=False)


def _peek_json(path: str) -> dict:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{path}: expected a JSON object")
    return doc


@cli.command("calibrate")
@click.argument("pairs", type=click.Path())
@click.option("--phi", required=True, help="target coverage level")
@click.option("--delta", default=None, help="stage-1 miss budget (default 0.05*phi)")
@click.option("--kappa", default="1", show_default=True)
@click.option("--distance", default="symdiff", show_default=True,
              type=click.Choice(["symdiff"]))
def cmd_calibrate(pairs: str, phi: str, delta: str | None, kappa: str, distance: str) -> None:
    """Two-stage calibration from a PAIRS file.

    PAIRS holds {"n", "edges", "pairs": [{"a": [...], "b": [...]}, ...]} with
    an optional "split" count for the stage-1 prefix (default: half).
    """
    doc = _peek_json(pairs)
    for key in ("n", "edges", "pairs"):
        if key not in doc:
            raise InputError(f"{pairs}: missing '{key}'")
    universe = WeightedHypergraph.build(
        doc["n"], [(e["v"], e.get("w", 1)) for e in doc["edges"]]
    )
    items = [
        LabeledPair(frozenset(p["a"]), frozenset(p["b"]), universe) for p in doc["pairs"]
    ]
    if len(items) < 2:
        raise InputError(f"{pairs}: need at least two pairs to split")
    split = doc.get("split", len(items) // 2)
    if not isinstance(split, int) or not 0 < split < len(items):
        raise InputError(f"{pairs}: bad split {split}")
    state = calibrate(
        items[:split],
        items[split:],
        as_fraction(phi),
        None if delta is None else as_fraction(delta),
        as_fraction(kappa),
    )
    overflow = state.tau_star == 1 and all(e.value < 1 for e in state.etas)
    report = {
        "d_star": "inf" if state.d_star == float("inf") else state.d_star,
        "tau_star": str(state.tau_star),
        "phi": str(state.phi),
        "delta": str(state.delta),
        "kappa": str(state.kappa),
        "etas": [str(e.value) for e in state.etas],
        "censored": [e.censored for e in state.etas],
        "quantile_overflow": overflow,
    }
    click.echo(canonical_json(report), nl=False)


@cli.command("fixed")
@click.argument("samples", type=click.Path())
@click.option("--phi", required=True, help="target coverage level")
def cmd_fixed(samples: str, phi: str) -> None:
    """Fixed-context fit: SAMPLES is an instance file whose edges are the draws."""
    h, _ = load_instance(samples)
    draws = [e.vertices for e in h.edges]
    fit = fixed_context_fit(draws, as_fraction(phi), h.n)
    report = {
        "vertices": sorted(fit.vertex_set),
        "size": len(fit.vertex_set),
        "level_count": fit.level_count,
        "second_half_coverage": str(fit.second_half_coverage),
    }
    click.echo(canonical_json(report), nl=False)


@cli.command("experiment")
@click.argument("kind", type=click.Choice(["grid", "trip", "adversarial"]))
@click.option("--out", required=True, type=click.Path())
@click.option("--seeds", default=None, help="comma-separated seed list")
@click.option("--phi-grid", default=None, help="comma-separated coverage grid")
@click.option("--alpha", default=0.4, show_default=True, help="trip core density")
@click.option("--path-len", "path_len", default=30, show_default=True, help="adversarial a")
@click.option("--parallel", default=3, show_default=True, help="adversarial b")
@click.option("--eps", default="0.2", show_default=True, help="adversarial mass")
@click.option("--kappa", default="1", show_default=True)
def cmd_experiment(kind: str, out: str, seeds: str | None, phi_grid: str | None,
                   alpha: float, path_len: int, parallel: int, eps: str, kappa: str) -> None:
    """Run a generator + methods sweep and write the result CSV to OUT."""
    seed_list = _ints_csv(seeds) if seeds else [_default_seed()]
    phis = _fractions_csv(phi_grid) if phi_grid else list(xp.default_phi_grid())
    rows: list[xp.ResultRow] = []
    if kind == "adversarial":
        rows = _adversarial_rows(path_len, parallel, as_fraction(eps), as_fraction(kappa), seed_list)
    else:
        methods = ("chain", "forward_greedy", "reverse_greedy")
        for seed in seed_list:
            if kind == "grid":
                data = xp.gen_grid_routes(xp.GridRoutingConfig(), seed)
            else:
                data = xp.gen_trip_samples(xp.TripPlanConfig(core_density=alpha), seed)
            rows.extend(xp.run_comparison(data.n, data.train, data.test, phis, methods, seed))
        _assert_row_invariants(rows)
    with open(out, "w") as fh:
        fh.write(result_csv(rows))
    click.echo(f"{len(rows)} rows -> {out}")


def _adversarial_rows(a: int, b: int, eps: Fraction, kappa: Fraction,
                      seeds: list[int]) -> list[xp.ResultRow]:
    from .baselines import reverse_greedy

    h = xp.gen_adversarial(a, b, eps)
    tau = 1 - eps
    chain = nested_chain(h)
    sel = select(chain, tau, kappa)
    eval_samples = [e.vertices for e in h.edges]
    train = list(eval_samples)
    # evaluation replicates edges proportionally to exact masses so that
    # covered fraction == covered mass fraction
    scale = math.lcm(*(e.weight.denominator for e in h.edges))
    weighted_eval = [
        s for s, e in zip(eval_samples, h.edges) for _ in range(int(e.weight * scale))
    ]
    rev, _ = reverse_greedy(train, weighted_eval, [tau], h.n)
    rows = []
    for seed in seeds:
        cov_chain = 1 - sel.residual / h.total_weight
        rows.append(xp.ResultRow("chain", tau, len(sel.vertex_set), cov_chain, seed))
        res = rev[tau]
        rows.append(xp.ResultRow("reverse_greedy", tau, len(res.vertex_set), res.coverage, seed))
    if len(sel.vertex_set) != b:
        raise InvariantError(f"chain selector kept {len(sel.vertex_set)} vertices, wanted {b}")
    if len(rev[tau].vertex_set) < a:
        raise InvariantError(f"reverse greedy kept {len(rev[tau].vertex_set)} < {a} vertices")
    return rows


def _assert_row_invariants(rows: list[xp.ResultRow]) -> None:
    by_method_seed: dict[tuple[str, int], list[xp.ResultRow]] = {}
    for r in rows:
        by_method_seed.setdefault((r.method, r.seed), []).append(r)
    for (method, seed), group in by_method_seed.items():
        group.sort(key=lambda r: r.phi)
        for prev, cur in zip(group, group[1:]):
            if cur.size < prev.size:
                raise InvariantError(
                    f"{method} seed {seed}: size decreased from phi={prev.phi} to {cur.phi}"
                )


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(1)
    except InvariantError as exc:
        click.echo(f"invariant violated: {exc}", err=True)
        sys.exit(2)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)


if __name__ == "__main__":
    main()
