"""Launch the mining service with uvicorn."""

import argparse

import uvicorn


def main() -> None:
    ap = argparse.ArgumentParser(prog="anytime-miner-serve")
    ap.add_argument("--host", default="127.0.0.1")
    ap.add_argument("--port", type=int, default=8000)
    args = ap.parse_args()
    uvicorn.run("anytime_miner.service:app", host=args.host, port=args.port)


if __name__ == "__main__":
    main()
