"""Command-line front end.

Subcommands: generate, solve, optimize-ref, study, render.  Every option can
come from a config file (--config FILE) with command-line flags overriding.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
import time

import numpy as np

from .config import ConfigError, GeneratorSpec, RenderSpec, RunConfig, parse_config
from .elastic import IsotropicModuli, LoadingSpec, phase_moduli
from .grid import PhaseGrid, dump_field, load_field
from .green import Scheme
from .homog import effective_modulus, size_convergence_study, write_entries_csv
from .micro import (boolean_spheres, cube_inclusion_3d, load_phase_grid,
                    save_phase_grid, sphere_array, square_inclusion_2d)
from .refopt import DescentError, optimize_reference
from .render import render_slice
from .solve import (Algorithm, SolveConfig, StopCause, default_reference, solve)


def build_phases(gen: GeneratorSpec, seed: int) -> PhaseGrid:
    if gen.kind == "square":
        return square_inclusion_2d(gen.size)
    if gen.kind == "cube":
        return cube_inclusion_3d(gen.size)
    if gen.kind == "sphere_array":
        return sphere_array(gen.size, gen.fraction, dim=gen.dim)
    if gen.kind == "boolean_spheres":
        return boolean_spheres(gen.size, gen.count, gen.diameter, seed, dim=gen.dim)
    if gen.kind == "file":
        return load_phase_grid(gen.path)
    raise ConfigError(f"unknown generator kind {gen.kind!r}")


def resolve_reference(cfg: RunConfig, phases, moduli, loading) -> IsotropicModuli:
    dim = phases.spec.dim
    if cfg.reference == "default":
        return default_reference(cfg.algorithm, cfg.chi, moduli, dim,
                                 scheme=cfg.scheme, beta=cfg.beta)
    if cfg.reference == "optimize":
        trace = optimize_reference(phases, moduli, loading, cfg.algorithm,
                                   cfg.scheme, tolerance=cfg.tolerance or 1e-8,
                                   cap=cfg.cap)
        return IsotropicModuli.from_young_poisson(trace.final_e0, 0.25, dim)
    return IsotropicModuli.from_young_poisson(float(cfg.reference), 0.25, dim)


def run(config_path_or_cfg) -> int:
    """Execute a full solve run; returns the process exit code."""
    cfg = (config_path_or_cfg if isinstance(config_path_or_cfg, RunConfig)
           else parse_config(config_path_or_cfg))
    os.makedirs(cfg.output, exist_ok=True)
    phases = build_phases(cfg.generator, cfg.seed)
    dim = phases.spec.dim
    moduli = phase_moduli(cfg.chi, dim)
    loading = LoadingSpec.unit(dim, cfg.loading)
    reference = resolve_reference(cfg, phases, moduli, loading)
    config = SolveConfig(scheme=cfg.scheme, algorithm=cfg.algorithm,
                         reference=reference, tolerance=cfg.tolerance,
                         stagnation=cfg.stagnation, cap=cfg.cap)
    report = solve(phases, moduli, loading, config)

    out = cfg.output
    save_phase_grid(os.path.join(out, "phases.raw"), phases,
                    generator=cfg.generator.kind,
                    params={"size": cfg.generator.size}, seed=cfg.seed)
    dump_field(os.path.join(out, "strain.raw"), phases.spec, report.strain)
    dump_field(os.path.join(out, "stress.raw"), phases.spec, report.stress)

    with open(os.path.join(out, "convergence.csv"), "w", newline="") as fh:
        writer = csv.writer(fh)
        comp_idx = loading.unit_component_index()
        writer.writerow(["iteration", "eta", "modulus_estimate"])
        for i in range(report.iterations):
            writer.writerow([i + 1, f"{report.eta_trace[i]:.10g}",
                             f"{report.mean_stress_trace[i, comp_idx]:.12g}"])

    entry = effective_modulus(report, loading)
    with open(os.path.join(out, "summary.txt"), "w") as fh:
        fh.write(f"generated={time.strftime('%Y-%m-%dT%H:%M:%S')}\n")
        fh.write(f"scheme={cfg.scheme.value}\n")
        fh.write(f"algorithm={cfg.algorithm.value}\n")
        fh.write(f"chi={cfg.chi}\n")
        fh.write(f"reference_young={reference.young(dim):.10g}\n")
        fh.write(f"iterations={report.iterations}\n")
        fh.write(f"stop={report.stop.value}\n")
        fh.write(f"eta_final={report.eta_final:.6g}\n")
        fh.write(f"effective_{entry.component}={entry.value:.12g}\n")
        fh.write(f"mean_strain_drift={report.mean_drift_max:.3g}\n")

    if cfg.render is not None:
        render_slice(report.stress, phases.spec, cfg.render,
                     os.path.join(out, "slice.png"))

    return 0 if report.converged else 1


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="config file; flags override its values")
    p.add_argument("--scheme", choices=[s.value for s in Scheme])
    p.add_argument("--algorithm", choices=[a.value for a in Algorithm])
    p.add_argument("--chi", type=float)
    p.add_argument("--loading")
    p.add_argument("--reference")
    p.add_argument("--beta", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--stagnation", type=float)
    p.add_argument("--cap", type=int)
    p.add_argument("--output")
    p.add_argument("--seed", type=int)
    p.add_argument("--generator", dest="kind",
                   choices=["square", "cube", "sphere_array", "boolean_spheres", "file"])
    p.add_argument("--size", type=int)
    p.add_argument("--dim", type=int, choices=[2, 3])
    p.add_argument("--fraction", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--diameter", type=float)
    p.add_argument("--grid-file", dest="path")


def _config_from_args(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    simple = {"chi": "chi", "loading": "loading", "reference": "reference",
              "beta": "beta", "tolerance": "tolerance", "stagnation": "stagnation",
              "cap": "cap", "output": "output", "seed": "seed"}
    for arg_name, cfg_name in simple.items():
        val = getattr(args, arg_name, None)
        if val is not None:
            setattr(cfg, cfg_name, val)
    if getattr(args, "scheme", None):
        cfg.scheme = Scheme(args.scheme)
    if getattr(args, "algorithm", None):
        cfg.algorithm = Algorithm(args.algorithm)
    for gen_key in ("kind", "size", "dim", "fraction", "count", "diameter", "path"):
        val = getattr(args, gen_key, None)
        if val is not None:
            setattr(cfg.generator, gen_key, val)
    return cfg


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fftmech",
        description="FFT homogenization of periodic voxel microstructures")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write a phase grid to disk")
    _add_common_flags(p_gen)

    p_solve = sub.add_parser("solve", help="run one solve and dump artifacts")
    _add_common_flags(p_solve)

    p_opt = sub.add_parser("optimize-ref", help="descend on the reference Young modulus")
    _add_common_flags(p_opt)

    p_study = sub.add_parser("study", help="size-convergence study over schemes and sizes")
    _add_common_flags(p_study)
    p_study.add_argument("--sizes", default="32,64",
                         help="comma-separated voxel sides")
    p_study.add_argument("--schemes", default="continuum,rotated",
                         help="comma-separated scheme names")

    p_render = sub.add_parser("render", help="render a slice of a dumped field")
    p_render.add_argument("field", help="raw field dump (with .hdr sidecar)")
    p_render.add_argument("--component", default="12")
    p_render.add_argument("--axis", type=int, default=2)
    p_render.add_argument("--offset", type=float, default=0.0)
    p_render.add_argument("--clamp", default="0,1")
    p_render.add_argument("--colormap", default="bgyr")
    p_render.add_argument("--window")
    p_render.add_argument("--out", default="slice.png")

    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            cfg = _config_from_args(args)
            os.makedirs(cfg.output, exist_ok=True)
            phases = build_phases(cfg.generator, cfg.seed)
            path = os.path.join(cfg.output, "phases.raw")
            save_phase_grid(path, phases, generator=cfg.generator.kind,
                            params={"size": cfg.generator.size,
                                    "fraction": cfg.generator.fraction,
                                    "count": cfg.generator.count,
                                    "diameter": cfg.generator.diameter},
                            seed=cfg.seed)
            print(f"wrote {path} (inclusion fraction "
                  f"{phases.inclusion_fraction:.4f})")
            return 0

        if args.command == "solve":
            return run(_config_from_args(args))

        if args.command == "optimize-ref":
            cfg = _config_from_args(args)
            os.makedirs(cfg.output, exist_ok=True)
            phases = build_phases(cfg.generator, cfg.seed)
            dim = phases.spec.dim
            moduli = phase_moduli(cfg.chi, dim)
            loading = LoadingSpec.unit(dim, cfg.loading)
            trace = optimize_reference(phases, moduli, loading, cfg.algorithm,
                                       cfg.scheme, tolerance=cfg.tolerance or 1e-8,
                                       cap=cfg.cap)
            path = os.path.join(cfg.output, "descent.csv")
            trace.write_csv(path)
            print(f"optimal E0 = {trace.final_e0:.6g} "
                  f"(N = {trace.final_iterations}); trace in {path}")
            return 0

        if args.command == "study":
            cfg = _config_from_args(args)
            os.makedirs(cfg.output, exist_ok=True)
            sizes = [int(s) for s in args.sizes.split(",")]
            schemes = [Scheme(s.strip()) for s in args.schemes.split(",")]
            gen_kind = cfg.generator.kind

            def generator(size):
                g = GeneratorSpec(kind=gen_kind, size=size, dim=cfg.generator.dim,
                                  fraction=cfg.generator.fraction,
                                  count=cfg.generator.count,
                                  diameter=cfg.generator.diameter,
                                  path=cfg.generator.path)
                return build_phases(g, cfg.seed)

            dim = generator(sizes[0]).spec.dim
            moduli = phase_moduli(cfg.chi, dim)
            loading = LoadingSpec.unit(dim, cfg.loading)

            def make_config(scheme):
                ref = default_reference(cfg.algorithm, cfg.chi, moduli, dim,
                                        scheme=scheme, beta=cfg.beta)
                return SolveConfig(scheme=scheme, algorithm=cfg.algorithm,
                                   reference=ref, tolerance=cfg.tolerance,
                                   stagnation=cfg.stagnation, cap=cfg.cap)

            path = os.path.join(cfg.output, "study.csv")
            entries = size_convergence_study(generator, schemes, sizes, moduli,
                                             loading, make_config, csv_path=path)
            for e in entries:
                flag = "" if e.converged else "  [not converged]"
                print(f"{e.scheme:17s} L={e.size:4d} C{e.component} = "
                      f"{e.value:.6f}  ({e.iterations} its){flag}")
            return 0

        if args.command == "render":
            spec, arr = load_field(args.field)
            clamp = tuple(float(x) for x in args.clamp.split(","))
            window = (tuple(float(x) for x in args.window.split(","))
                      if args.window else None)
            rspec = RenderSpec(component=args.component, axis=args.axis,
                               offset=args.offset, clamp=clamp,
                               colormap=args.colormap, window=window)
            render_slice(arr, spec, rspec, args.out)
            print(f"wrote {args.out}")
            return 0
    except (ConfigError, DescentError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
