"""Command-line entry point: configure and serve the HTTP API."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .api import Session, create_app, load_tokens
from .liveweb import provider_from_config
from .service import CurationService, ServiceConfig

logger = logging.getLogger(__name__)

DEFAULT_CDX_ENDPOINT = "https://web.archive.org/cdx/search/cdx"
DEFAULT_SAVE_ENDPOINT = "https://web.archive.org/save"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archivecurator",
        description="Collaborative web-archive collection curation service",
    )
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--data-dir", required=True, help="state directory (event log + snapshots)")
    parser.add_argument("--cdx-endpoint", default=DEFAULT_CDX_ENDPOINT)
    parser.add_argument("--save-endpoint", default=DEFAULT_SAVE_ENDPOINT)
    parser.add_argument("--live-provider-config", default=None, help="JSON provider config")
    parser.add_argument("--tokens-file", default=None, help="JSON map of bearer token to user")
    parser.add_argument("--probe-parallelism", type=int, default=8)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(name)s %(message)s")
    args = build_parser().parse_args(argv)

    provider = None
    if args.live_provider_config:
        provider = provider_from_config(args.live_provider_config)

    if args.tokens_file:
        sessions = load_tokens(args.tokens_file)
    else:
        sessions = {"dev-token": Session(token="dev-token", user_id="dev", display_name="Developer")}
        logger.warning("no --tokens-file given; using the single development token 'dev-token'")

    config = ServiceConfig(
        data_dir=Path(args.data_dir),
        cdx_endpoint=args.cdx_endpoint,
        save_endpoint=args.save_endpoint,
        probe_parallelism=args.probe_parallelism,
    )
    service = CurationService(config, provider=provider)
    app = create_app(service, sessions)

    import uvicorn

    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except OSError as exc:
        print(f"failed to bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
