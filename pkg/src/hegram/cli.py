"""Command-line interface.

Subcommands: ``preprocess``, ``keygen``, ``build-hist``, ``detect``,
``inject``, ``bench``, ``size``.  Exit codes: 0 on success, 1 on usage
errors, 2 on data errors.  The key store location can be set globally
through the ``HEGRAM_KEYSTORE`` environment variable; every other file
path is an explicit flag.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import bench as bench_mod
from .buckets import Histogram, layout_for_buckets
from .contexts import ContextConfig, SimulatedContext, make_context
from .core import build_histogram
from .detector import (
    DetectorConfig,
    HANDOFF_MODES,
    HANDOFF_SHARED_KEYS,
    run_uc1,
    run_uc2,
    run_uc3,
)
from .exceptions import ConfigurationError, HegramError
from .pipeline import build_reference, clamp_for_layout, load_csv, scale, split_days
from .scenarios import (
    SCENARIO_KINDS,
    SCENARIO_LETTERS,
    ScenarioSpec,
    canonical_reference,
    fixture_suite,
    inject as inject_scenario,
    read_scaled_csv,
    synthetic_reference_days,
    write_fixture_csv,
    write_scaled_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


@click.group()
def cli():
    """Histogram anomaly detection over plain or encrypted integer streams."""


@cli.command()
@click.option("--input", "input_path", required=True, help="Raw CSV of timestamp,value_kw.")
@click.option("--output", "output_path", required=True, help="Destination CSV of hour_index,scaled_value.")
@click.option("--scale-min", type=float, default=None, help="Lower scaling bound (default: input minimum).")
@click.option("--scale-max", type=float, default=None, help="Upper scaling bound (default: input maximum).")
@click.option("--clamp/--no-clamp", default=True, show_default=True, help="Saturate out-of-bound readings instead of failing.")
def preprocess(input_path, output_path, scale_min, scale_max, clamp):
    """Normalise raw hourly readings onto the integer range [0, 100]."""
    series = load_csv(input_path)
    if len(series) == 0:
        raise ConfigurationError(f"{input_path} contains no readings")
    lo = float(series.values.min()) if scale_min is None else scale_min
    hi = float(series.values.max()) if scale_max is None else scale_max
    scaled = scale(series, lo, hi, clamp=clamp)
    write_scaled_csv(scaled.values, output_path)
    click.echo(f"wrote {len(scaled)} scaled readings to {output_path}")


@cli.command()
@click.option("--context", "kind", type=click.Choice(["simulated", "native"]), default="simulated", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--keystore", type=str, default=None, help="Key store root (default: $HEGRAM_KEYSTORE or ./keys).")
@click.option("--context-id", type=str, default=None, help="Directory name for the key pair (default: key id).")
def keygen(kind, seed, keystore, context_id):
    """Generate a key pair and persist it to the key store."""
    ctx = make_context(ContextConfig(kind=kind, rng_seed=seed))
    ctx.keygen()
    if not isinstance(ctx, SimulatedContext):
        raise ConfigurationError("only the simulated backend persists keys to the store")
    stored_id = ctx.save_keys(root=keystore, context_id=context_id)
    click.echo(json.dumps({"context_id": stored_id, "kind": kind, "seed": seed}))


def _load_reference_days(path):
    values = read_scaled_csv(path)
    return split_days(values)


@cli.command("build-hist")
@click.option("--reference", "reference_path", required=True, help="Scaled CSV of one or more full days.")
@click.option("--buckets", type=int, default=10, show_default=True)
@click.option("--min", "value_min", type=int, default=0, show_default=True)
@click.option("--max", "value_max", type=int, default=100, show_default=True)
@click.option("--context", "kind", type=click.Choice(["plain", "simulated", "native"]), default="plain", show_default=True)
@click.option("--average/--raw", default=True, show_default=True, help="Histogram the per-hour day means vs. raw samples.")
@click.option("--out", "out_path", type=str, default=None, help="Write the histogram JSON here instead of stdout.")
@click.option("--seed", type=int, default=0, show_default=True)
def build_hist(reference_path, buckets, value_min, value_max, kind, average, out_path, seed):
    """Build a reference histogram from scaled readings."""
    layout = layout_for_buckets(value_min, value_max, buckets)
    days = _load_reference_days(reference_path)
    samples = build_reference(days) if average else np.concatenate(days)
    samples = clamp_for_layout(samples, layout)
    ctx = make_context(ContextConfig(kind=kind, rng_seed=seed))
    ctx.keygen()
    hist = build_histogram(samples, layout, ctx)
    payload = {
        "value_min": value_min,
        "value_max": value_max,
        "num_buckets": buckets,
        "bucket_width": layout.width,
        "counts": [int(c) for c in hist.decrypt(ctx)],
    }
    text = json.dumps(payload, indent=2)
    if out_path:
        Path(out_path).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote histogram to {out_path}")
    else:
        click.echo(text)


def _load_hist_json(path, layout):
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    expected = {
        "value_min": layout.value_min,
        "value_max": layout.value_max,
        "num_buckets": len(layout),
    }
    for key, want in expected.items():
        if payload.get(key) != want:
            raise ConfigurationError(
                f"histogram file {key}={payload.get(key)} does not match configured {want}"
            )
    return Histogram.from_counts(layout, payload["counts"])


@cli.command()
@click.option("--uc", type=click.Choice(["1", "2", "3"]), required=True, help="Use-case configuration.")
@click.option("--context", "kind", type=click.Choice(["plain", "simulated", "native"]), default="plain", show_default=True)
@click.option("--data", "data_path", required=True, help="Scaled CSV of readings to label.")
@click.option("--reference", "reference_path", default=None, help="Scaled CSV of reference days.")
@click.option("--hist", "hist_path", default=None, help="Histogram JSON (UC-1 alternative to --reference).")
@click.option("--threshold", type=int, default=2, show_default=True)
@click.option("--buckets", type=int, default=10, show_default=True)
@click.option("--min", "value_min", type=int, default=0, show_default=True)
@click.option("--max", "value_max", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--keystore", type=str, default=None)
@click.option("--handoff", type=click.Choice(HANDOFF_MODES), default=HANDOFF_SHARED_KEYS, show_default=True)
def detect(uc, kind, data_path, reference_path, hist_path, threshold, buckets, value_min, value_max, seed, keystore, handoff):
    """Label readings as normal (0) or anomalous (1); prints a JSON manifest."""
    cfg = DetectorConfig(
        num_buckets=buckets,
        threshold=threshold,
        value_min=value_min,
        value_max=value_max,
        context=ContextConfig(kind=kind, rng_seed=seed),
        handoff_mode=handoff,
        keystore_path=keystore,
    )
    data = read_scaled_csv(data_path)
    if uc == "1":
        layout = cfg.layout()
        if hist_path:
            hist = _load_hist_json(hist_path, layout)
        elif reference_path:
            days = _load_reference_days(reference_path)
            samples = clamp_for_layout(build_reference(days), layout)
            oracle = make_context("plain")
            hist = Histogram.from_counts(
                layout, build_histogram(samples, layout, oracle).counts
            )
        else:
            raise ConfigurationError("UC-1 needs --hist or --reference")
        run = run_uc1(hist, data, cfg)
    else:
        if not reference_path:
            raise ConfigurationError(f"UC-{uc} needs --reference")
        days = _load_reference_days(reference_path)
        run = run_uc2(days, data, cfg) if uc == "2" else run_uc3(days, data, cfg)
    click.echo(json.dumps(run.manifest(), indent=2))


@cli.command()
@click.option("--kind", type=click.Choice(SCENARIO_KINDS), default=None, help="Scenario to inject.")
@click.option("--suite", is_flag=True, help="Regenerate the canonical a..e fixture suite.")
@click.option("--reference", "reference_path", default=None, help="Scaled CSV with the base day (default: built-in profile).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--count", type=int, default=None, help="Number of injected positions (kind-specific default).")
@click.option("--out", "out_path", default=None, help="Fixture CSV destination (single scenario).")
@click.option("--outdir", default="fixtures", show_default=True, help="Directory for --suite output.")
def inject(kind, suite, reference_path, seed, count, out_path, outdir):
    """Produce labeled anomaly fixtures from a reference day."""
    if suite:
        outdir = Path(outdir)
        for letter, fixture in fixture_suite().items():
            write_fixture_csv(fixture, outdir / f"scenario_{letter}.csv")
        days = synthetic_reference_days()
        write_scaled_csv(
            np.concatenate([d.values for d in days]), outdir / "reference_days.csv"
        )
        click.echo(f"wrote {len(SCENARIO_LETTERS)} fixtures and reference days to {outdir}")
        return
    if kind is None:
        raise ConfigurationError("pass --kind or --suite")
    if reference_path:
        base = read_scaled_csv(reference_path)
        if len(base) > 24:
            base = build_reference(split_days(base))
    else:
        base = canonical_reference()
    fixture = inject_scenario(base, ScenarioSpec(kind=kind, seed=seed, count=count))
    if out_path is None:
        raise ConfigurationError("pass --out for single-scenario injection")
    write_fixture_csv(fixture, out_path)
    click.echo(
        json.dumps({"kind": kind, "true_anomalies": fixture.true_anomalies, "out": str(out_path)})
    )


def _parse_grid(text):
    cells = []
    for token in text.split(","):
        token = token.strip().lower()
        if not token:
            continue
        try:
            days, buckets = token.split("x")
            cells.append((int(days), int(buckets)))
        except ValueError:
            raise ConfigurationError(
                f"bad grid cell {token!r}; expected DAYSxBUCKETS like 1x10"
            ) from None
    return cells


@cli.command("bench")
@click.option("--grid", default="1x10,1x20,1x50,2x10,2x20,2x50", show_default=True, help="Comma-separated DAYSxBUCKETS cells.")
@click.option("--uc", type=click.Choice(["1", "2", "3"]), default="3", show_default=True)
@click.option("--context", "kind", type=click.Choice(["plain", "simulated", "native"]), default="simulated", show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--threshold", type=int, default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", "out_path", default=None, help="Write the report here instead of stdout.")
@click.option("--keystore", type=str, default=None)
def bench_command(grid, uc, kind, seed, threshold, fmt, out_path, keystore):
    """Run the benchmark grid and emit a JSON or CSV report."""
    report = bench_mod.run_bench(
        _parse_grid(grid),
        use_case=int(uc),
        context_kind=kind,
        seed=seed,
        threshold=threshold,
        keystore_path=keystore,
    )
    text = report.to_json() if fmt == "json" else report.to_csv()
    if out_path:
        Path(out_path).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        click.echo(f"wrote {fmt} report to {out_path}")
    else:
        click.echo(text)


@cli.command()
@click.option("--days", type=int, required=True)
@click.option("--buckets", type=int, required=True)
@click.option("--phase", type=click.Choice([bench_mod.PHASE_DETECTION, bench_mod.PHASE_HISTOGRAM]), default=bench_mod.PHASE_DETECTION, show_default=True)
def size(days, buckets, phase):
    """Print the clear-input size in bytes for one configuration."""
    click.echo(bench_mod.clear_input_size(days, buckets, phase))


def main(argv=None) -> int:
    """Entry point with the documented exit-code mapping."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.exceptions.Exit as exc:  # e.g. --help
        return EXIT_OK if exc.exit_code == 0 else exc.exit_code
    except click.UsageError as exc:
        message = exc.format_message()
        hint = ""
        if exc.ctx is not None:
            hint = f"\n{exc.ctx.get_usage()}\nTry '--help' for help."
        click.echo(f"error: {message}{hint}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except (HegramError, OSError, json.JSONDecodeError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
