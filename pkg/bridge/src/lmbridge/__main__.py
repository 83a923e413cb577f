"""Command line entry: run the service or a fine-tuning job."""

import argparse
import sys

from .config import BridgeConfig
from .errors import BridgeError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lmbridge")
    commands = parser.add_subparsers(dest="command", required=True)

    serve_cmd = commands.add_parser("serve", help="serve /generate and /health over HTTP")
    serve_cmd.add_argument("--model", help="hub model name or checkpoint directory")
    serve_cmd.add_argument("--host", default="127.0.0.1")
    serve_cmd.add_argument("--port", type=int, default=8500)

    tune = commands.add_parser("finetune", help="fine-tune on a derived samples file")
    tune.add_argument("--samples", required=True)
    tune.add_argument("--passages", help="passages file; omit to train on passage-free queries")
    tune.add_argument("--out", required=True, help="checkpoint directory to write")
    tune.add_argument("--model", help="hub model name or checkpoint directory to start from")
    tune.add_argument("--lr", type=float, default=5e-05)
    tune.add_argument("--dropout", type=float, default=0.1)
    tune.add_argument("--epochs", type=int, default=5)
    tune.add_argument("--weight-decay", type=float, default=0.0, dest="weight_decay")
    tune.add_argument("--seed", type=int)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            from .service import serve

            serve(BridgeConfig(), port=args.port, host=args.host, model_source=args.model)
            return 0
        config = BridgeConfig(
            learning_rate=args.lr,
            dropout=args.dropout,
            epochs=args.epochs,
            weight_decay=args.weight_decay,
            seed=args.seed,
        )
        from .finetune import finetune

        log = finetune(
            args.samples, args.out, config, passages_path=args.passages, model_source=args.model
        )
        first, last = log["steps"][0]["loss"], log["steps"][-1]["loss"]
        print(f"trained {log['samples']} samples for {config.epochs} epochs; "
              f"loss {first:.4f} -> {last:.4f}; checkpoint in {args.out}")
        return 0
    except (BridgeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
