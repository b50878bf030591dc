"""Command line for the toolkit.

Every command is a thin client of the HTTP service in :mod:`trichrome.service`:
by default the app is driven in-process (no socket involved), and ``--server
URL`` points the same client at a remotely running instance instead.

Exit codes:

* 0 -- success
* 1 -- honest negative (diagrams not equal, no rewrite path found)
* 2 -- usage error (bad arguments, unreachable server)
* 3 -- parse or validation failure in an input diagram or script
* 4 -- verification failure (a failing suite, or a script step that does not
       replay or is not semantics-preserving)
"""

from __future__ import annotations

import asyncio
import sys
from pathlib import Path

import click
import httpx

from . import __version__
from .verify import SUITE_NAMES

EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_VERIFY = 4

_KIND_EXIT = {
    "parse": EXIT_INVALID,
    "validation": EXIT_INVALID,
    "script": EXIT_VERIFY,
    "usage": EXIT_USAGE,
}

_FLAVOUR_NAMES = ("rg", "rgplus", "rgb")


class CommandFailure(click.ClickException):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


def _request(server: str | None, path: str, payload: dict) -> dict:
    async def go() -> httpx.Response:
        if server is None:
            from .service import app

            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://service.internal", timeout=None
            ) as client:
                return await client.post(path, json=payload)
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.post(path, json=payload)

    try:
        resp = asyncio.run(go())
    except httpx.HTTPError as exc:
        raise CommandFailure(f"service request failed: {exc}", EXIT_USAGE) from exc
    if resp.status_code == 422:
        detail = resp.json().get("detail")
        if isinstance(detail, dict) and "kind" in detail:
            kind, message = detail["kind"], detail["message"]
        else:
            kind, message = "usage", f"invalid request: {detail}"
        raise CommandFailure(message, _KIND_EXIT.get(kind, EXIT_USAGE))
    if resp.status_code >= 400:
        raise CommandFailure(
            f"service error {resp.status_code}: {resp.text}", EXIT_USAGE
        )
    return resp.json()


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__)
@click.option(
    "--server",
    default=None,
    metavar="URL",
    help="Send requests to a running service instead of working in-process.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """Evaluate, rewrite, translate, and verify coloured spider diagrams."""
    ctx.obj = server


@main.command("eval")
@click.argument("file", type=_FILE)
@click.option("--float", "float_mode", is_flag=True, help="Use complex doubles.")
@click.pass_obj
def eval_cmd(server: str | None, file: Path, float_mode: bool) -> None:
    """Print the matrix a diagram denotes, one row per line."""
    data = _request(server, "/eval", {"source": _read(file), "float_mode": float_mode})
    click.echo("\n".join(", ".join(row) for row in data["entries"]))


@main.command()
@click.argument("left", type=_FILE)
@click.argument("right", type=_FILE)
@click.option("--float", "float_mode", is_flag=True, help="Compare complex doubles.")
@click.option("--tol", type=float, default=None, help="Tolerance (implies floats).")
@click.pass_obj
def equal(
    server: str | None, left: Path, right: Path, float_mode: bool, tol: float | None
) -> None:
    """Test whether two diagrams are equal up to a nonzero scalar."""
    data = _request(
        server,
        "/equal",
        {
            "left": _read(left),
            "right": _read(right),
            "float_mode": float_mode,
            "tol": tol,
        },
    )
    if data["equal"]:
        click.echo("equal")
    else:
        click.echo("not equal")
        sys.exit(EXIT_NEGATIVE)


@main.command()
@click.argument("file", type=_FILE)
@click.option("--script", "script_file", type=_FILE, required=True)
@click.option(
    "--show-steps", is_flag=True, help="Echo each applied step to stderr."
)
@click.pass_obj
def rewrite(
    server: str | None, file: Path, script_file: Path, show_steps: bool
) -> None:
    """Replay a rewrite script against a diagram and print the result.

    Every step is checked to preserve the matrix semantics exactly; a step
    that fails to match, matches ambiguously, or changes the semantics stops
    the replay with exit code 4.
    """
    data = _request(
        server, "/rewrite", {"source": _read(file), "script": _read(script_file)}
    )
    if show_steps:
        for line in data["steps"]:
            click.echo(line, err=True)
    click.echo(data["result"])


@main.command()
@click.argument("file", type=_FILE)
@click.option(
    "--to",
    "target",
    type=click.Choice(["rgb", "rgplus"]),
    required=True,
    help="Target flavour.",
)
@click.pass_obj
def translate(server: str | None, file: Path, target: str) -> None:
    """Translate a diagram into another flavour (semantics-preserving)."""
    data = _request(server, "/translate", {"source": _read(file), "to": target})
    click.echo(data["result"])


@main.command()
@click.argument("left", type=_FILE)
@click.argument("right", type=_FILE)
@click.option("--depth", type=int, default=6, show_default=True)
@click.option("--max-states", type=int, default=30000, show_default=True)
@click.option(
    "--flavour",
    type=click.Choice(_FLAVOUR_NAMES),
    default=None,
    help="Assert the flavour of both inputs.",
)
@click.pass_obj
def search(
    server: str | None,
    left: Path,
    right: Path,
    depth: int,
    max_states: int,
    flavour: str | None,
) -> None:
    """Search for a rewrite script connecting two diagrams.

    Prints the script on success; exits with code 1 when no path of at most
    DEPTH steps exists within the state budget.
    """
    data = _request(
        server,
        "/search",
        {
            "left": _read(left),
            "right": _read(right),
            "depth": depth,
            "max_states": max_states,
            "flavour": flavour,
        },
    )
    if not data["found"]:
        click.echo(f"no path found (depth {depth})")
        sys.exit(EXIT_NEGATIVE)
    click.echo(data["script"] if data["script"] else "# no steps needed")


@main.command()
@click.option("--suite", type=click.Choice(SUITE_NAMES), required=True)
@click.option(
    "--flavour",
    "flavours",
    type=click.Choice(_FLAVOUR_NAMES),
    multiple=True,
    help="Restrict to these flavours (repeatable; default: all).",
)
@click.option("--max-arity", type=int, default=None, help="Skip wider rule instances.")
@click.pass_obj
def verify(
    server: str | None, suite: str, flavours: tuple[str, ...], max_arity: int | None
) -> None:
    """Run one verification suite; exit code 4 when any check fails."""
    data = _request(
        server,
        "/verify",
        {
            "suite": suite,
            "flavours": list(flavours) or None,
            "max_arity": max_arity,
        },
    )
    click.echo(data["report"])
    if not data["ok"]:
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service on a socket (requires uvicorn)."""
    try:
        import uvicorn
    except ImportError as exc:
        raise CommandFailure(
            "uvicorn is not installed (pip install 'trichrome[serve]')", EXIT_USAGE
        ) from exc
    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
