"""``camexport`` command line interface: export / finetune / split."""

from __future__ import annotations

import argparse
import sys

from .export import export_activations
from .finetune import DEFAULT_EPOCHS, DEFAULT_LR, DEFAULT_MOMENTUM, finetune_expert
from .split import SPLIT_NAMES, materialize_split, split_dataset


def _parse_ratios(text: str) -> tuple[float, ...]:
    values = tuple(float(p) for p in text.split(","))
    total = sum(values)
    if abs(total - 100.0) < 1e-9:  # allow percentage form, e.g. 60,20,20
        values = tuple(v / 100.0 for v in values)
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="camexport",
        description="Export CNN activations/weights and prepare binary expert models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    export = sub.add_parser("export", help="export one image's activations and class weights")
    export.add_argument("--model", default="resnet152", help="architecture (default resnet152)")
    export.add_argument("--checkpoint", default=None, help="fine-tuned checkpoint to load")
    export.add_argument("--image", required=True, help="input image")
    export.add_argument("--out", required=True, help="output directory")
    export.add_argument("--id", default=None, help="model label recorded in the manifest")
    export.add_argument(
        "--pretrained", action="store_true",
        help="use torchvision ImageNet weights (downloads; default is seeded random init)",
    )

    finetune = sub.add_parser("finetune", help="fine-tune a binary expert network")
    finetune.add_argument("--train", required=True, help="training directory (two class subdirs)")
    finetune.add_argument("--val", required=True, help="validation directory (same classes)")
    finetune.add_argument("--epochs", type=int, default=DEFAULT_EPOCHS)
    finetune.add_argument("--lr", type=float, default=DEFAULT_LR)
    finetune.add_argument("--momentum", type=float, default=DEFAULT_MOMENTUM)
    finetune.add_argument("--out", required=True, help="checkpoint path")
    finetune.add_argument("--model", default="resnet152")
    finetune.add_argument("--batch-size", type=int, default=16)
    finetune.add_argument("--seed", type=int, default=0)
    finetune.add_argument("--pretrained", action="store_true")

    split = sub.add_parser("split", help="partition a labeled image set into train/val/test")
    split.add_argument("--src", required=True, help="source directory")
    split.add_argument("--ratios", type=_parse_ratios, default=(0.6, 0.2, 0.2),
                       help="comma-separated ratios, e.g. 60,20,20 (default)")
    split.add_argument("--seed", type=int, default=0)
    split.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "export":
            record = export_activations(
                args.image,
                args.out,
                model_name=args.model,
                checkpoint=args.checkpoint,
                pretrained=args.pretrained,
                model_id=args.id,
            )
            print(f"predicted_class={record.predicted_class}")
            print(f"activations={record.activations}")
            print(f"weights={record.weights}")
            print(f"manifest={record.manifest}")
        elif args.command == "finetune":
            summary = finetune_expert(
                args.train,
                args.val,
                args.out,
                model_name=args.model,
                epochs=args.epochs,
                lr=args.lr,
                momentum=args.momentum,
                batch_size=args.batch_size,
                pretrained=args.pretrained,
                seed=args.seed,
            )
            print(f"checkpoint={summary['checkpoint']}")
            print(f"best_epoch={summary['epoch']}")
            print(f"val_accuracy={summary['val_accuracy']:.4f}")
        else:
            partition = split_dataset(args.src, ratios=args.ratios, seed=args.seed)
            listings = materialize_split(partition, args.src, args.out)
            for name in SPLIT_NAMES:
                print(f"{name}={len(partition[name])} listing={listings[name]}")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
