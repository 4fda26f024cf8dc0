"""
Tests for the MCP server tools
"""

import pytest
import json
from src import mcp_server


def tool(name):
    """The plain coroutine behind a registered tool"""
    registered = getattr(mcp_server, name)
    return getattr(registered, "fn", registered)


@pytest.fixture
def patched_store(mocker, store):
    """Point the server at a temporary lens store"""
    mocker.patch.object(mcp_server, "store", store)
    return store


class TestSpecTools:
    """Test suite for the spec-file tools"""

    @pytest.mark.asyncio
    async def test_check_spec(self, swap_spec):
        """Test checking a spec whose tests pass"""
        result_data = json.loads(await tool("check_spec")(swap_spec))

        assert result_data["ok"] is True
        assert result_data["tests_passed"] == 4
        assert result_data["failures"] == []

    @pytest.mark.asyncio
    async def test_check_spec_invalid(self):
        """Test that unparsable text is reported, not raised"""
        result_data = json.loads(await tool("check_spec")("let = ;"))
        assert result_data["error"] == "Invalid spec"

    @pytest.mark.asyncio
    async def test_apply_lens(self, swap_spec):
        """Test running a lens function"""
        result_data = json.loads(await tool("apply_lens")(swap_spec, "pair", "putR", "ba,2", "1,ab"))

        assert result_data["output"] == "2,ba"

    @pytest.mark.asyncio
    async def test_apply_lens_bad_requests(self, swap_spec):
        """Test invalid operations, missing old strings and unknown lenses"""
        apply_lens = tool("apply_lens")

        bad_op = json.loads(await apply_lens(swap_spec, "pair", "get", "ab,1"))
        no_old = json.loads(await apply_lens(swap_spec, "pair", "putL", "1,ab"))
        unknown = json.loads(await apply_lens(swap_spec, "nope", "createR", "ab,1"))

        assert bad_op["error"] == "Invalid operation"
        assert no_old["error"] == "Missing argument"
        assert unknown["error"] == "UnresolvedLibRef"

    @pytest.mark.asyncio
    async def test_entropy_of(self):
        """Test measuring a definition"""
        result_data = json.loads(await tool("entropy_of")('let coin = "a" | "b" ;', "coin"))
        assert result_data["entropy"] == 1.0

    @pytest.mark.asyncio
    async def test_synthesize(self):
        """Test that directives are rewritten and reported"""
        spec = 'let bits = ("0" | "1")* ;\nlet same : bits <=> bits = synth using { } ;\n'
        result_data = json.loads(await tool("synthesize")(spec, 10.0, 10))
        (result,) = result_data["results"]

        assert result["name"] == "same"
        assert result["cost"] == 0.0
        assert result["error"] is None
        assert "synth using" not in result_data["spec"]


class TestStoreTools:
    """Test suite for the lens store tools"""

    @pytest.mark.asyncio
    async def test_save_and_list(self, patched_store):
        """Test that saved lenses are listed"""
        await tool("save_lens")("same", "bits", "bits", "id(bits)", 0.0, 0)
        result_data = json.loads(await tool("list_lenses")())

        assert result_data["count"] == 1
        assert result_data["lenses"][0]["name"] == "same"

    @pytest.mark.asyncio
    async def test_get_and_remove(self, patched_store):
        """Test looking up and removing a saved lens"""
        await tool("save_lens")("same", "bits", "bits", "id(bits)")

        found = json.loads(await tool("get_lens")("same"))
        removed = json.loads(await tool("remove_lens")("same"))
        missing = json.loads(await tool("get_lens")("same"))

        assert found["lens"] == "id(bits)"
        assert removed["success"] is True
        assert missing["error"] == "Not found"
