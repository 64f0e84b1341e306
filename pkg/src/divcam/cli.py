"""``localize`` command line interface.

Subcommands:

    run    full dual-expert run: both overlays, kernel overlay, kernel
           heat map, manifest
    sweep  kernel heat map per amplification value plus a grid image
    cam    single expert's activation-map overlay, no kernel

Each expert is given either as an activations/weights file pair
(``--interest-acts``/``--interest-weights``) or as a precomputed map
(``--interest-cam``), likewise for ``--other-*``. Options may also come
from a ``key=value`` config file (``--config``); keys are the long option
names without the leading dashes, and explicit flags win.

Exit codes: 0 success, 2 invalid input or parameters, 3 an expert's map
had no positive activation to normalize by, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .errors import InputError, NonPositiveMaxError, ParameterError, PipelineError
from .kernel import DEFAULT_ALPHA
from .pipeline import (
    DEFAULT_DISPLAY_SIZE,
    DEFAULT_OPACITY,
    ExpertExport,
    PipelineConfig,
    alpha_sweep,
    run_pipeline,
    single_cam_overlay,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC_GUARD = 3
EXIT_IO = 4


def _parse_size(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ValueError(f"size must look like 224x224, got {text!r}")
    width, height = (int(p) for p in parts)
    return (height, width)


def _parse_alphas(text: str) -> list[float]:
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError(f"no alphas in {text!r}")
    return values


@dataclass(frozen=True)
class Opt:
    dest: str
    flag: str
    convert: Callable
    default: object = None
    required: bool = False
    help: str = ""


def _expert_opts(role: str) -> list[Opt]:
    return [
        Opt(f"{role}_acts", f"--{role}-acts", Path, help=f"{role} expert activations (.npy, shape CxHxW)"),
        Opt(f"{role}_weights", f"--{role}-weights", Path, help=f"{role} expert class weights (.npy, shape C)"),
        Opt(f"{role}_cam", f"--{role}-cam", Path, help=f"precomputed {role} map (.npy, shape HxW)"),
        Opt(f"{role}_class", f"--{role}-class", int, default=0, help=f"{role} class index (default 0)"),
        Opt(f"{role}_id", f"--{role}-id", str, default=role, help=f"label for the {role} expert"),
    ]


_COMMON = [
    Opt("out", "--out", Path, required=True, help="output directory"),
    Opt("config", "--config", Path, help="key=value file mirroring these options"),
]

_RUN_OPTS = (
    _expert_opts("interest")
    + _expert_opts("other")
    + [
        Opt("image", "--image", Path, required=True, help="source image (PNG)"),
        Opt("alpha", "--alpha", float, default=DEFAULT_ALPHA, help="amplification (default 5)"),
        Opt("opacity", "--opacity", float, default=DEFAULT_OPACITY, help="overlay opacity (default 0.5)"),
        Opt("size", "--size", _parse_size, default=DEFAULT_DISPLAY_SIZE, help="heat map size WxH (default 224x224)"),
    ]
    + _COMMON
)

_SWEEP_OPTS = (
    _expert_opts("interest")
    + _expert_opts("other")
    + [
        Opt("image", "--image", Path, help="source image, used only for output naming"),
        Opt("alphas", "--alphas", _parse_alphas, required=True, help="comma-separated amplifications"),
        Opt("size", "--size", _parse_size, default=DEFAULT_DISPLAY_SIZE, help="heat map size WxH (default 224x224)"),
    ]
    + _COMMON
)

_CAM_OPTS = [
    Opt("acts", "--acts", Path, help="expert activations (.npy, shape CxHxW)"),
    Opt("weights", "--weights", Path, help="expert class weights (.npy, shape C)"),
    Opt("cam", "--cam", Path, help="precomputed map (.npy, shape HxW)"),
    Opt("class_index", "--class", int, default=0, help="class index (default 0)"),
    Opt("model_id", "--id", str, default="expert", help="label for the expert"),
    Opt("image", "--image", Path, required=True, help="source image (PNG)"),
    Opt("opacity", "--opacity", float, default=DEFAULT_OPACITY, help="overlay opacity (default 0.5)"),
] + _COMMON

_SUBCOMMANDS = {"run": _RUN_OPTS, "sweep": _SWEEP_OPTS, "cam": _CAM_OPTS}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="localize",
        description="Discriminative localization from dual expert activation maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "run": "full dual-expert run producing overlays, kernel heat map, and manifest",
        "sweep": "render the kernel heat map for several amplification values",
        "cam": "overlay a single expert's activation map on the image",
    }
    for name, opts in _SUBCOMMANDS.items():
        p = sub.add_parser(name, help=descriptions[name], description=descriptions[name])
        for opt in opts:
            p.add_argument(opt.flag, dest=opt.dest, default=None, help=opt.help, metavar="V")
    return parser


def _read_config(path: Path) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ParameterError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve(args: argparse.Namespace, opts: list[Opt]) -> dict:
    config: dict[str, str] = {}
    if getattr(args, "config", None) is not None:
        config = _read_config(Path(args.config))
    known_keys = {opt.flag.lstrip("-") for opt in opts}
    unknown = set(config) - known_keys
    if unknown:
        raise ParameterError(f"unknown config keys: {', '.join(sorted(unknown))}")

    resolved = {}
    for opt in opts:
        raw = getattr(args, opt.dest)
        if raw is None:
            raw = config.get(opt.flag.lstrip("-"))
        if raw is None:
            if opt.required:
                raise ParameterError(f"missing required option {opt.flag}")
            resolved[opt.dest] = opt.default
            continue
        try:
            resolved[opt.dest] = opt.convert(str(raw))
        except (ValueError, TypeError) as exc:
            raise ParameterError(f"bad value for {opt.flag}: {exc}") from exc
    return resolved


def _expert_from(values: dict, role: str) -> ExpertExport:
    return ExpertExport(
        model_id=values[f"{role}_id"],
        activations=values[f"{role}_acts"],
        weights=values[f"{role}_weights"],
        cam=values[f"{role}_cam"],
        class_index=values[f"{role}_class"],
    )


def _cmd_run(values: dict) -> dict[str, str]:
    config = PipelineConfig(
        interest=_expert_from(values, "interest"),
        other=_expert_from(values, "other"),
        image=values["image"],
        output_dir=values["out"],
        alpha=values["alpha"],
        opacity=values["opacity"],
        display_size=values["size"],
    )
    return run_pipeline(config)


def _cmd_sweep(values: dict) -> dict[str, str]:
    config = PipelineConfig(
        interest=_expert_from(values, "interest"),
        other=_expert_from(values, "other"),
        image=values["image"],
        output_dir=values["out"],
        display_size=values["size"],
    )
    return alpha_sweep(config, values["alphas"])


def _cmd_cam(values: dict) -> dict[str, str]:
    export = ExpertExport(
        model_id=values["model_id"],
        activations=values["acts"],
        weights=values["weights"],
        cam=values["cam"],
        class_index=values["class_index"],
    )
    return single_cam_overlay(export, values["image"], values["out"], opacity=values["opacity"])


_HANDLERS = {"run": _cmd_run, "sweep": _cmd_sweep, "cam": _cmd_cam}


def _classify(exc: BaseException) -> int:
    if isinstance(exc, NonPositiveMaxError):
        return EXIT_NUMERIC_GUARD
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, OSError):
        return EXIT_IO
    return EXIT_INPUT


def _report(exc: BaseException) -> int:
    cause = exc.cause if isinstance(exc, PipelineError) else exc
    code = _classify(cause)
    if isinstance(cause, NonPositiveMaxError):
        detail = f"expert produced no positive activation for its class ({cause.source}; maximum {cause.maximum:g})"
        if isinstance(exc, PipelineError):
            detail = f"[{exc.stage}] {detail}"
    else:
        detail = str(exc)
    print(f"error: {detail}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    opts = _SUBCOMMANDS[args.command]
    try:
        manifest = _HANDLERS[args.command](_resolve(args, opts))
    except (PipelineError, NonPositiveMaxError, InputError, OSError) as exc:
        return _report(exc)
    for key, value in manifest.items():
        print(f"{key}={value}")
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
