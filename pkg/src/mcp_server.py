"""
MCP Server for Lens Synthesis

This server provides:
- Tools: checking, synthesizing and running lenses written in spec files, and
  measuring the entropy of definitions
- Tools: a local store for synthesized lenses
- Resources: stored lenses by name
- Prompts: a guide to the spec-file grammar
"""

import json
from typing import Optional

from fastmcp import FastMCP

from src import lens as ln
from src import sre
from src.config import load_settings
from src.database import LensStore
from src.errors import LensError
from src.logger import get_logger
from src.specfile import build_environment, check_spec as run_check, load_spec, synth_spec

logger = get_logger(__name__)

# Initialize FastMCP server
mcp = FastMCP("Lens Synthesis Server")

settings = load_settings()
store = LensStore(settings.db_path)


def _error(kind: str, e: Exception) -> str:
    return json.dumps({"error": kind, "message": str(e)})


# Tools - Spec files
@mcp.tool()
async def check_spec(spec: str) -> str:
    """
    Typecheck a spec file and run its tests.

    Args:
        spec: Spec-file text (let definitions, lens definitions, test statements)

    Returns:
        JSON with ok, counts and one entry per failure
    """
    try:
        report = run_check(load_spec(spec), settings)
    except LensError as e:
        return _error("Invalid spec", e)
    return json.dumps({
        "ok": report.ok,
        "definitions": report.definitions,
        "tests_run": report.tests_run,
        "tests_passed": report.tests_passed,
        "pending": report.pending,
        "failures": [
            {"line": f.line, "what": f.what, "message": f.message,
             "expected": f.expected, "actual": f.actual}
            for f in report.failures
        ]
    }, indent=2)


@mcp.tool()
async def synthesize(spec: str, timeout: Optional[float] = None,
                     max_expansions: Optional[int] = None) -> str:
    """
    Synthesize every `synth` directive in a spec file.

    Use this tool to turn formats and examples into lenses. Lenses defined
    earlier in the file are available to later directives.

    Args:
        spec: Spec-file text
        timeout: Optional wall-clock limit per directive, in seconds
        max_expansions: Optional cap on explored expression pairs per directive

    Returns:
        JSON with the rewritten spec and one result per directive
    """
    limits = settings.limits.with_overrides(max_expansions, timeout)
    try:
        text, outcomes = synth_spec(load_spec(spec), limits, settings)
    except LensError as e:
        return _error("Invalid spec", e)
    return json.dumps({
        "spec": text,
        "results": [
            {"name": o.name, "line": o.line, "lens": o.lens_text,
             "cost": o.result.cost if o.ok else None,
             "distance": o.result.distance if o.ok else None,
             "timed_out": o.timed_out, "error": o.error}
            for o in outcomes
        ]
    }, indent=2)


@mcp.tool()
async def apply_lens(spec: str, lens: str, op: str, input: str, old: Optional[str] = None) -> str:
    """
    Run one function of a lens defined in a spec file.

    Args:
        spec: Spec-file text defining the lens
        lens: Lens name
        op: One of createR, createL, putR, putL
        input: The new string
        old: The existing string on the other side (putR and putL only)

    Returns:
        JSON with the output string
    """
    if op not in ("createR", "createL", "putR", "putL"):
        return json.dumps({"error": "Invalid operation",
                           "message": "op must be one of createR, createL, putR, putL"})
    if op.startswith("put") and old is None:
        return json.dumps({"error": "Missing argument", "message": f"{op} needs old"})
    try:
        env, library = build_environment(load_spec(spec), settings)
        ev = ln.LensEvaluator(env, library)
        target = ln.LibRef(lens)
        library.get(lens)
        if op == "createR":
            output = ev.create_r(target, input)
        elif op == "createL":
            output = ev.create_l(target, input)
        elif op == "putR":
            output = ev.put_r(target, input, old)
        else:
            output = ev.put_l(target, input, old)
    except LensError as e:
        return _error(type(e).__name__, e)
    return json.dumps({"lens": lens, "op": op, "output": output}, indent=2)


@mcp.tool()
async def entropy_of(spec: str, name: str) -> str:
    """
    Entropy in bits of a regex or SRE definition.

    Unannotated operators use the default probabilities (stars 4/5, unions
    weighted so every alternative is equally likely).

    Args:
        spec: Spec-file text
        name: Definition to measure

    Returns:
        JSON with the entropy
    """
    try:
        env, _ = build_environment(load_spec(spec), settings)
        bits = sre.entropy(sre.binding(env, name), env)
    except LensError as e:
        return _error(type(e).__name__, e)
    return json.dumps({"name": name, "entropy": round(bits, 6)}, indent=2)


# Tools - Lens store
@mcp.tool()
async def save_lens(name: str, source: str, target: str, lens: str,
                    cost: Optional[float] = None, distance: Optional[int] = None,
                    notes: str = "") -> str:
    """
    Save a lens to the local store.

    Args:
        name: Lens name
        source: Source type in concrete syntax
        target: Target type in concrete syntax
        lens: Lens in concrete syntax
        cost: Optional cost in bits
        distance: Optional search distance
        notes: Optional notes

    Returns:
        Confirmation message with the stored entry
    """
    return await store.save_lens(name, source, target, lens, cost, distance, notes)


@mcp.tool()
async def list_lenses() -> str:
    """
    List all stored lenses.

    Returns:
        JSON string containing every stored lens
    """
    return await store.list_lenses()


@mcp.tool()
async def get_lens(name: str) -> str:
    """
    Look up a stored lens by name.

    Returns:
        JSON string with the lens entry, or an error
    """
    return await store.get_lens(name)


@mcp.tool()
async def remove_lens(name: str) -> str:
    """
    Remove a stored lens.

    Returns:
        Confirmation message
    """
    return await store.remove_lens(name)


# Resources - Stored lenses
@mcp.resource("lens://{name}")
async def lens_resource(name: str) -> str:
    """
    A stored lens by name.

    Returns:
        JSON string with the lens entry
    """
    return await store.get_lens(name)


# Prompts
@mcp.prompt()
async def write_spec(source_format: str, target_format: str) -> str:
    """
    Help write a spec file that synthesizes a lens between two formats.
    """
    return f"""Please help me write a lens spec file.

Source format: {source_format}
Target format: {target_format}

1. Define the pieces of both formats with `let name = <regex> ;`
   (string literals in double quotes, juxtaposition for concatenation,
   `|` for union, postfix `*` for repetition, parentheses for grouping)
2. Declare the lens: `let l : Source <=> Target = synth using {{ ("source example", "target example") }} ;`
3. Add tests such as `test createR l "input" = "expected" ;`
4. Run the synthesize tool, then check_spec on the result
"""


if __name__ == "__main__":
    # Run in stdio mode (launched by the client)
    mcp.run()
