"""
Lens Store

Keeps synthesized lenses in a local JSON file so they can be listed, looked
up and reused across sessions of the MCP server.
"""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional


class LensStore:
    """Local JSON store for synthesized lenses"""

    def __init__(self, db_path: Optional[str] = None):
        """
        Initialize the store.

        Args:
            db_path: Optional path to the store file. Defaults to data/local_db.json
        """
        if db_path is None:
            project_root = Path(__file__).parent.parent
            self.db_path = project_root / "data" / "local_db.json"
        else:
            self.db_path = Path(db_path)

        self._initialize_db()

    def _initialize_db(self):
        """Create the store file if it doesn't exist"""
        if not self.db_path.exists():
            self.db_path.parent.mkdir(parents=True, exist_ok=True)
            self._write_db({"lenses": []})

    def _read_db(self) -> Dict[str, Any]:
        """Read the store file"""
        try:
            with open(self.db_path, 'r') as f:
                content = f.read().strip()
                if not content:
                    return {"lenses": []}
                data = json.loads(content)
                data.setdefault("lenses", [])
                return data
        except json.JSONDecodeError:
            # A corrupted file starts over empty
            return {"lenses": []}
        except Exception as e:
            raise Exception(f"Failed to read lens store: {str(e)}")

    def _write_db(self, data: Dict[str, Any]):
        """Write the store file"""
        try:
            with open(self.db_path, 'w') as f:
                json.dump(data, f, indent=2)
        except Exception as e:
            raise Exception(f"Failed to write to lens store: {str(e)}")

    @staticmethod
    def _not_found(name: str) -> str:
        return json.dumps({
            "error": "Not found",
            "message": f"No lens named {name} in the store"
        })

    async def save_lens(self, name: str, source: str, target: str, lens: str,
                        cost: Optional[float] = None, distance: Optional[int] = None,
                        notes: str = "") -> str:
        """
        Save a lens, replacing any earlier lens with the same name.

        Args:
            name: Lens name
            source: Source type in concrete syntax
            target: Target type in concrete syntax
            lens: Lens in concrete syntax
            cost: Cost in bits, if known
            distance: Search distance at which it was found, if synthesized
            notes: Free-form notes

        Returns:
            Success message as JSON string
        """
        if not name or not name.replace("_", "a").isalnum() or name[0].isdigit():
            return json.dumps({
                "error": "Invalid name",
                "message": "Lens names are identifiers (letters, digits, underscores)"
            })

        db = self._read_db()
        replaced = any(entry["name"] == name for entry in db["lenses"])
        db["lenses"] = [entry for entry in db["lenses"] if entry["name"] != name]

        entry = {
            "name": name,
            "source": source,
            "target": target,
            "lens": lens,
            "cost": cost,
            "distance": distance,
            "notes": notes,
            "saved_at": datetime.now().isoformat()
        }
        db["lenses"].append(entry)
        self._write_db(db)

        return json.dumps({
            "success": True,
            "message": f"{'Replaced' if replaced else 'Saved'} lens {name}",
            "lens": entry
        }, indent=2)

    async def list_lenses(self) -> str:
        """
        List every stored lens.

        Returns:
            JSON string with the count and the lenses
        """
        db = self._read_db()
        return json.dumps({
            "count": len(db["lenses"]),
            "lenses": db["lenses"]
        }, indent=2)

    async def get_lens(self, name: str) -> str:
        db = self._read_db()
        for entry in db["lenses"]:
            if entry["name"] == name:
                return json.dumps(entry, indent=2)
        return self._not_found(name)

    async def remove_lens(self, name: str) -> str:
        """
        Remove a lens by name.

        Returns:
            Success message as JSON string
        """
        db = self._read_db()
        original_count = len(db["lenses"])
        db["lenses"] = [entry for entry in db["lenses"] if entry["name"] != name]

        if len(db["lenses"]) == original_count:
            return self._not_found(name)

        self._write_db(db)
        return json.dumps({
            "success": True,
            "message": f"Removed lens {name}"
        }, indent=2)

    async def search_lenses(self, query: str) -> str:
        """
        Search lenses by name, types and notes.

        Args:
            query: Case-insensitive substring

        Returns:
            JSON string containing matching lenses
        """
        db = self._read_db()
        query_lower = query.lower()
        matches = [
            entry for entry in db["lenses"]
            if any(query_lower in str(entry.get(key, "")).lower()
                   for key in ("name", "source", "target", "notes"))
        ]
        return json.dumps({
            "query": query,
            "count": len(matches),
            "matches": matches
        }, indent=2)

    async def clear_all(self) -> str:
        """
        Remove every stored lens. This cannot be undone.

        Returns:
            Success message as JSON string
        """
        self._write_db({"lenses": []})
        return json.dumps({
            "success": True,
            "message": "All lenses have been cleared"
        }, indent=2)
