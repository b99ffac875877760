"""Command-line front end over the basis, invariant, and transfer engines.

Exit codes: 0 success, 1 empty result (no solution, empty basis), 2 usage
or parse error, 3 internal invariant violation.  Values (a zero polynomial,
a parity bit) are results, not emptiness, and exit 0.
"""

from __future__ import annotations

import json
import os
import sys
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

import click

from cohit.divided import format_divided, pairing, parse_divided
from cohit.hitbasis import _cache_path, admissible_basis_and_reducer, zero_plus_split
from cohit.invariants import global_glk_invariants, sigma_components, weight_strata
from cohit.lam import adem_reduce, differential, format_lambda, is_cocycle, parse_lambda
from cohit.poly import format_monomial, format_poly, parse_poly, weight_vector
from cohit.preimage import (
    DEFAULT_KERNEL_CAP,
    DEFAULT_MAX_Z_TERMS,
    PreimageProblem,
    find_preimages,
)
from cohit.transfer import VARIANTS, transfer_poly

EXIT_EMPTY = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _default_cache_dir() -> Path:
    root = os.environ.get("XDG_CACHE_HOME", str(Path.home() / ".cache"))
    return Path(root) / "cohit"


def _read_input(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        try:
            return Path(value[1:]).read_text()
        except OSError as exc:
            raise click.UsageError(f"cannot read {value[1:]}: {exc}")
    return value


def _parse(parser, text: str):
    try:
        return parser(_read_input(text))
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _emit(data: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


def _par_map(jobs: int):
    if jobs <= 1:
        return map

    def pooled(fn, items):
        with Pool(jobs) as pool:
            return pool.map(fn, list(items))

    return pooled


@click.group()
def cli() -> None:
    """Cohit bases, full-group invariants, and lambda-algebra transfer."""


@cli.command()
@click.option("--k", type=int, required=True, help="Number of variables.")
@click.option("--d", type=int, required=True, help="Degree.")
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              help="Cache directory (defaults to the user cache).")
@click.option("--jobs", type=int, default=1, show_default=True,
              help="Worker processes for the hit matrix; output bytes never change.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def basis(k: int, d: int, cache_dir: Optional[Path], jobs: int, fmt: str) -> None:
    """Admissible monomial basis of one degree, with the zero/plus split."""
    if k < 1 or d < 0:
        raise click.UsageError("need --k >= 1 and --d >= 0")
    cache = cache_dir if cache_dir is not None else _default_cache_dir()
    hb = admissible_basis_and_reducer(k, d, cache_dir=cache, par_map=_par_map(jobs))
    zero, plus = zero_plus_split(hb)
    cache_file = _cache_path(cache, k, d)
    data = {
        "k": k,
        "d": d,
        "monomials": len(hb.ordered_monomials),
        "dimension": len(hb.admissible),
        "zero": [format_monomial(m) for m in zero],
        "plus": [format_monomial(m) for m in plus],
        "cache": str(cache_file),
    }
    lines = [
        f"k={k} d={d}: {data['monomials']} monomials, dimension {data['dimension']} "
        f"({len(zero)} with a zero exponent, {len(plus)} all-positive)",
        f"cache: {cache_file}",
    ]
    if zero:
        lines.append("zero part:")
        lines.extend(f"  {format_monomial(m)}" for m in zero)
    if plus:
        lines.append("all-positive part:")
        lines.extend(f"  {format_monomial(m)}" for m in plus)
    _emit(data, fmt, lines)
    if not hb.admissible:
        sys.exit(EXIT_EMPTY)


def _invariants_text(k: int, d: int, hb, cert, report: str) -> list[str]:
    strata = weight_strata(hb)
    lines = [f"k={k} d={d}: case {cert.case_tag}"]
    if cert.main_weight is not None:
        lines[-1] += f", main weight {format_monomial(cert.main_weight)}"
    if report == "text":
        lines.append("=" * 60)
        lines.append("WEIGHT-WISE INVARIANT ANALYSIS")
        lines.append("=" * 60)
    for stratum in strata:
        comps = sigma_components(stratum, hb)
        head = (f"weight {format_monomial(stratum.omega)}: {len(stratum.basis)} monomials, "
                f"{len(comps)} components {sorted((len(c.members) for c in comps), reverse=True)}")
        lines.append(head)
        if report == "text":
            for c in comps:
                lines.append(f"  component of {len(c.members)}, "
                             f"invariants {len(c.kernel)}")
    if cert.case_tag == "CASE_2":
        lines.append(f"correction terms: {len(cert.h_prime)}")
        lines.append(f"global symmetric basis: {len(cert.global_sigma_basis)}")
        if report == "text":
            lines.append("constraint equations:")
            for eq in cert.constraint_equations:
                lines.append("  " + " + ".join(f"b{i}" for i in eq) + " = 0")
    lines.append(f"invariant dimension: {len(cert.invariant_basis)}")
    for i, inv in enumerate(cert.invariant_basis, start=1):
        lines.append(f"invariant {i} ({len(inv)} terms): {format_poly(inv)}")
    return lines


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--d", type=int, required=True)
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
@click.option("--report", type=click.Choice(["summary", "text"]), default="summary",
              show_default=True, help="Text verbosity; json output is unaffected.")
def invariants(k: int, d: int, cache_dir: Optional[Path], jobs: int, fmt: str,
               report: str) -> None:
    """Full-group invariants of the cohit quotient in one degree."""
    if k < 1 or d < 0:
        raise click.UsageError("need --k >= 1 and --d >= 0")
    cache = cache_dir if cache_dir is not None else _default_cache_dir()
    hb = admissible_basis_and_reducer(k, d, cache_dir=cache, par_map=_par_map(jobs))
    cert = global_glk_invariants(k, d, hb)
    data = {
        "k": k,
        "d": d,
        "case": cert.case_tag,
        "main_weight": format_monomial(cert.main_weight) if cert.main_weight else None,
        "correction": format_poly(cert.h_prime) if cert.h_prime is not None else None,
        "global_sigma_dimension": len(cert.global_sigma_basis),
        "dimension": len(cert.invariant_basis),
        "invariants": [format_poly(p) for p in cert.invariant_basis],
    }
    _emit(data, fmt, _invariants_text(k, d, hb, cert, report))
    if not cert.invariant_basis:
        sys.exit(EXIT_EMPTY)


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--target", required=True,
              help="Target lambda polynomial, e.g. \"3,3,2\" ('-' = stdin, @file).")
@click.option("--variant", type=click.Choice(list(VARIANTS)), default="chon-ha",
              show_default=True)
@click.option("--max-z-terms", type=int, default=DEFAULT_MAX_Z_TERMS, show_default=True)
@click.option("--kernel-cap", type=int, default=DEFAULT_KERNEL_CAP, show_default=True)
@click.option("--z-indices", type=click.Choice(["positive", "nonneg"]),
              default="positive", show_default=True,
              help="Allow zero letters in boundary-correction words.")
@click.option("--all", "all_solutions", is_flag=True,
              help="One solution per workable correction candidate, not just the first.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def preimage(k: int, target: str, variant: str, max_z_terms: int, kernel_cap: int,
             z_indices: str, all_solutions: bool, fmt: str) -> None:
    """Search for an annihilated transfer preimage of a cocycle."""
    y = _parse(parse_lambda, target)
    try:
        problem = PreimageProblem(
            k=k, y=frozenset(y), variant=variant, max_z_terms=max_z_terms,
            kernel_cap=kernel_cap, z_indices=z_indices,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if variant == "chon-ha" and not is_cocycle(y):
        boundary = adem_reduce(differential(y))
        raise click.UsageError(
            f"target is not a cocycle: its boundary is {format_lambda(boundary)}")
    result = find_preimages(problem, all_solutions=all_solutions)
    data = {
        "status": result.status,
        "variant": variant,
        "candidates_checked": result.candidates_checked,
        "solutions": [
            {
                "x": format_divided(sol.x),
                "z": format_lambda(sol.z),
                "y_admissible": format_lambda(sol.certificate),
            }
            for sol in result.solutions
        ],
    }
    lines = [f"status: {result.status} "
             f"(candidates checked: {result.candidates_checked})"]
    for i, sol in enumerate(result.solutions, start=1):
        lines.append(f"solution {i}:")
        lines.append(f"  x ({len(sol.x)} terms) = {format_divided(sol.x)}")
        lines.append(f"  z = {format_lambda(sol.z)}")
        lines.append(f"  y admissible = {format_lambda(sol.certificate)}")
    _emit(data, fmt, lines)
    if not result.solutions:
        sys.exit(EXIT_EMPTY)


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--input", "text", required=True,
              help="Divided-power polynomial, e.g. \"2,3,3 + 1,4,3\".")
@click.option("--variant", type=click.Choice(list(VARIANTS)), default="chon-ha",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def transfer(k: int, text: str, variant: str, fmt: str) -> None:
    """Chain-level transfer of a divided-power polynomial, raw and reduced."""
    x = _parse(parse_divided, text)
    try:
        raw = transfer_poly(k, x, variant=variant)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    reduced = adem_reduce(raw)
    data = {
        "k": k,
        "variant": variant,
        "unreduced": format_lambda(raw),
        "reduced": format_lambda(reduced),
        "unreduced_terms": len(raw),
        "reduced_terms": len(reduced),
    }
    lines = [
        f"Final unreduced result: varphi_{k}(input) = {format_lambda(raw)}",
        f"Final reduced result: varphi_{k}(input) = {format_lambda(reduced)}",
    ]
    _emit(data, fmt, lines)


@cli.group(name="lambda")
def lambda_group() -> None:
    """Differential and normal form inside the lambda algebra."""


@lambda_group.command()
@click.option("--input", "text", required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def diff(text: str, fmt: str) -> None:
    """Reduced boundary of a lambda polynomial."""
    p = _parse(parse_lambda, text)
    out = adem_reduce(differential(p))
    _emit({"input": format_lambda(p), "differential": format_lambda(out)},
          fmt, [format_lambda(out)])


@lambda_group.command()
@click.option("--input", "text", required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def reduce(text: str, fmt: str) -> None:
    """Admissible normal form of a lambda polynomial."""
    p = _parse(parse_lambda, text)
    out = adem_reduce(p)
    _emit({"input": format_lambda(p), "reduced": format_lambda(out)},
          fmt, [format_lambda(out)])


@cli.command()
@click.option("--x", "x_text", required=True, help="Homology-side polynomial.")
@click.option("--f", "f_text", required=True, help="Cohomology-side polynomial.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text",
              show_default=True)
def pair(x_text: str, f_text: str, fmt: str) -> None:
    """Parity of the matching terms between dual polynomials."""
    x = _parse(parse_divided, x_text)
    f = _parse(parse_poly, f_text)
    try:
        bit = pairing(set(f), set(x))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit({"pairing": bit}, fmt, [str(bit)])


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(EXIT_USAGE)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.Abort:
        sys.exit(EXIT_USAGE)
    except (AssertionError, RuntimeError) as exc:
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)


if __name__ == "__main__":
    main()
