"""Command-line front end.

Two subcommands: ``localize`` runs the fusion pipeline on one image and
writes a result JSON (optionally an overlay image with the predicted boxes
drawn in green); ``eval`` runs it over a dataset manifest and renders a
CorLoc report.

Exit codes: 0 success, 1 data/runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np
from PIL import Image, ImageDraw

from . import backends, dataset, evaluation, fusion, imageio

EXIT_OK = 0
EXIT_DATA_ERROR = 1
EXIT_USAGE = 2


class DataError(Exception):
    """Runtime/data failure that should exit with code 1."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuefusion",
        description="Unsupervised object localization by fusing saliency "
        "maps with region proposals.",
    )
    parser.add_argument("--config", type=Path, help="TOML config file; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser):
        p.add_argument("--saliency", choices=["file", "contrast"], default="file",
                       help="saliency source: sidecar file or contrast fallback")
        p.add_argument("--proposals", choices=["file", "anchors"], default="file",
                       help="proposal source: sidecar CSV or anchor fallback")
        p.add_argument("--profile", choices=sorted(fusion.PROFILES),
                       help="published per-dataset threshold set")
        p.add_argument("--t-ps", type=int, default=None, help="binarization intensity threshold (0-255)")
        p.add_argument("--t-a", type=int, default=None, help="minimum salient-region area in pixels")
        p.add_argument("--t-nms", type=float, default=None, help="NMS IoU threshold in [0,1]")
        p.add_argument("--t-hist", type=float, default=None, help="histogram-similarity merge threshold in [0,1]")
        p.add_argument("--no-merge", action="store_true", help="disable low-overlap merging")
        p.add_argument("--saliency-suffix", default=backends.DEFAULT_SALIENCY_SUFFIX,
                       help="sidecar filename suffix for saliency rasters")
        p.add_argument("--blur-radius", type=int, default=3, help="contrast-fallback blur radius")
        p.add_argument("--anchor-stride", type=int, default=16)
        p.add_argument("--anchor-scales", default="32,64,128,256", help="comma-separated anchor scales")
        p.add_argument("--anchor-aspects", default="0.5,1.0,2.0", help="comma-separated anchor aspect ratios")
        p.add_argument("--max-proposals", type=int, default=2000)
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--overlay", action="store_true", help="also write an overlay image with boxes drawn")

    p_loc = sub.add_parser("localize", help="localize objects in one image")
    p_loc.add_argument("image", type=Path)
    add_common(p_loc)

    p_eval = sub.add_parser("eval", help="evaluate CorLoc over a dataset")
    p_eval.add_argument("root", type=Path)
    add_common(p_eval)
    p_eval.add_argument("--layout", choices=dataset.LAYOUTS, default="flat")
    p_eval.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_eval.add_argument("--report", choices=["csv", "markdown"], default="markdown")
    p_eval.add_argument("--report-out", type=Path,
                        help="write the report to this file instead of stdout")
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Turn TOML config keys into parser defaults so explicit flags win."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config", type=Path)
    known, _ = probe.parse_known_args(argv)
    if known.config is None:
        return argv
    if not known.config.is_file():
        raise DataError(f"config file not found: {known.config}")
    with open(known.config, "rb") as fh:
        values = tomllib.load(fh)
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if isinstance(value, str) and dest in ("out", "report_out"):
            value = Path(value)
        defaults[dest] = value
    for sub_action in parser._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
        sub_action.set_defaults(**{k: v for k, v in defaults.items()
                                   if k in {a.dest for a in sub_action._actions}})
    return argv


def _resolve_config(args: argparse.Namespace) -> fusion.FusionConfig:
    base = fusion.PROFILES[args.profile] if args.profile else fusion.FusionConfig()
    values = base.as_dict()
    for name in ("t_ps", "t_a", "t_nms", "t_hist"):
        override = getattr(args, name)
        if override is not None:
            values[name] = override
    if args.no_merge:
        values["merge_low_overlap"] = False
    try:
        return fusion.FusionConfig(**values)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


class UsageError(Exception):
    pass


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad numeric list {text!r}") from exc


def _proposal_source(args: argparse.Namespace) -> backends.ProposalSource:
    kind = "file" if args.proposals == "file" else "anchor-fallback"
    try:
        return backends.ProposalSource(
            kind=kind,
            scales=tuple(int(v) for v in _parse_floats(args.anchor_scales)),
            aspects=_parse_floats(args.anchor_aspects),
            stride=args.anchor_stride,
            max_proposals=args.max_proposals,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _saliency_for(
    image_path: Path,
    sidecar: Optional[Path],
    image: np.ndarray,
    args: argparse.Namespace,
):
    if args.saliency == "contrast":
        return backends.contrast_saliency(image, args.blur_radius)
    h, w = image.shape[:2]
    if sidecar is None:
        for ext in (".png", ".pgm"):
            candidate = image_path.with_name(
                image_path.stem + args.saliency_suffix + ext
            )
            if candidate.is_file():
                sidecar = candidate
                break
    if sidecar is None:
        raise DataError(
            f"no saliency sidecar for {image_path} "
            f"(looked for stem + {args.saliency_suffix!r} + .png/.pgm); "
            "use --saliency contrast for the fallback"
        )
    try:
        return backends.load_saliency(sidecar, w, h)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc


def _proposals_for(
    image_path: Path,
    sidecar: Optional[Path],
    image: np.ndarray,
    source: backends.ProposalSource,
    saliency,
    args: argparse.Namespace,
):
    h, w = image.shape[:2]
    if source.kind == "anchor-fallback":
        return backends.anchor_proposals(w, h, source, saliency=saliency)
    if sidecar is None:
        candidate = image_path.with_name(image_path.stem + dataset.PROPOSAL_SUFFIX + ".csv")
        if candidate.is_file():
            sidecar = candidate
    if sidecar is None:
        raise DataError(
            f"no proposal sidecar for {image_path}; use --proposals anchors for the fallback"
        )
    try:
        return backends.load_proposals(sidecar, w, h, source.max_proposals)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc


def _write_overlay(image: np.ndarray, result: fusion.LocalizationResult, path: Path):
    img = Image.fromarray(image)
    draw = ImageDraw.Draw(img)
    for box in result.boxes:
        draw.rectangle(box.as_tuple(), outline=(0, 255, 0), width=2)
    img.save(path)


def _run_one(
    image_path: Path,
    saliency_sidecar: Optional[Path],
    proposal_sidecar: Optional[Path],
    config: fusion.FusionConfig,
    source: backends.ProposalSource,
    args: argparse.Namespace,
) -> tuple[np.ndarray, fusion.LocalizationResult]:
    try:
        image = imageio.read_color(image_path)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    saliency = _saliency_for(image_path, saliency_sidecar, image, args)
    proposals = _proposals_for(
        image_path, proposal_sidecar, image, source, saliency, args
    )
    result = fusion.localize(image, saliency, proposals, config)
    return image, result


def cmd_localize(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    source = _proposal_source(args)
    image, result = _run_one(args.image, None, None, config, source, args)
    args.out.mkdir(parents=True, exist_ok=True)
    out_json = args.out / (args.image.stem + ".json")
    out_json.write_text(result.to_json(image=args.image.name, config=config), encoding="utf-8")
    if args.overlay:
        _write_overlay(image, result, args.out / (args.image.stem + "_overlay.png"))
    print(f"wrote {out_json} ({len(result.boxes)} boxes)")
    return EXIT_OK


def _group_key(entry: dataset.ManifestEntry, truth: evaluation.GroundTruth) -> str:
    if entry.camera is not None:
        return f"{entry.camera}/{entry.illumination}/{entry.category}"
    if entry.category != "all":
        return entry.category
    return truth.category


def cmd_eval(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    source = _proposal_source(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    try:
        manifest = dataset.scan(args.root, args.layout)
    except (OSError, ValueError) as exc:
        raise DataError(str(exc)) from exc
    if not manifest.ground_truth:
        raise DataError(f"no {dataset.GROUND_TRUTH_FILENAME} under {args.root}")
    entries = [e for e in manifest.entries if e.image_id in manifest.ground_truth]
    if not entries:
        raise DataError("no images with ground truth found")

    args.out.mkdir(parents=True, exist_ok=True)

    def work(entry: dataset.ManifestEntry):
        _, result = _run_one(
            entry.image_path, entry.saliency_path, entry.proposal_path,
            config, source, args,
        )
        return entry.image_id, result

    if args.jobs == 1:
        results = [work(e) for e in entries]
    else:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(work, entries))
    results.sort(key=lambda item: item[0])

    by_category: dict[str, list[evaluation.EvalRecord]] = {}
    by_id = {e.image_id: e for e in entries}
    for image_id, result in results:
        truth = manifest.ground_truth[image_id]
        out_json = args.out / (image_id.replace("/", "__") + ".json")
        out_json.write_text(result.to_json(image=image_id, config=config), encoding="utf-8")
        record = evaluation.score_image(result, truth)
        by_category.setdefault(_group_key(by_id[image_id], truth), []).append(record)

    try:
        report = evaluation.corloc(by_category)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    text = evaluation.render_report(report, format=args.report)
    if args.report_out:
        args.report_out.parent.mkdir(parents=True, exist_ok=True)
        args.report_out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if args.command == "localize":
            return cmd_localize(args)
        return cmd_eval(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
