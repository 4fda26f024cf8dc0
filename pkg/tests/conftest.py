"""
Pytest configuration and shared fixtures
"""

import pytest
import json
import tempfile
from pathlib import Path
from src.database import LensStore
from src.specfile import build_environment, load_spec


UPPER = " | ".join(f'"{c}"' for c in "ABCDEFGHIJKLMNOPQRSTUVWXYZ")
LOWER = " | ".join(f'"{c}"' for c in "abcdefghijklmnopqrstuvwxyz")
DIGIT = " | ".join(f'"{c}"' for c in "0123456789")

EMPLOYEE_SPEC = f"""
# Salaries on one side, insurance companies on the other
let upper = {UPPER} ;
let lower = {LOWER} ;
let digit = {DIGIT} ;
let name = upper lower* ;
let number = digit digit* ;
let salary = number | "unk" ;
let emp_salary = name " " name ": " salary ;
let emp_salaries = "" | emp_salary ("\\n" emp_salary)* ;
let co_name = ({UPPER}) ({LOWER})* ;
let company = co_name " " ("Co." | "Inc." | "Ltd.") | "UNK" ;
let emp_ins = name " " name "," company ;
let header = "FirstLast,Company" ;
let emp_insurance = header ("\\n" emp_ins)* ;
"""

EMPLOYEE_LEFT = "Jane Doe: 38000\nJohn Public: 37500"
EMPLOYEE_RIGHT = "FirstLast,Company\nJane Doe,Healthcare Inc.\nJohn Public,Insurance Co."

SWAP_SPEC = """
let letter = "a" | "b" | "c" ;
let word = letter letter* ;
let digit = "0" | "1" | "2" ;
let number = digit digit* ;
let pair : word "," number <=> number "," word =
    swap(concat(ins(","), id(word)), concat(del(","), id(number))) ;
test createR pair "ab,12" = "12,ab" ;
test createL pair "0,c" = "c,0" ;
test putR pair "ba,2" "1,ab" = "2,ba" ;
test putL pair "21,cc" "ab,12" = "cc,21" ;
"""


@pytest.fixture
def temp_db():
    """Create a temporary lens store file for testing"""
    with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
        temp_path = f.name
        json.dump({"lenses": []}, f)

    yield temp_path

    # Cleanup
    Path(temp_path).unlink(missing_ok=True)


@pytest.fixture
def store(temp_db):
    """Create a LensStore instance with temporary storage"""
    return LensStore(db_path=temp_db)


@pytest.fixture
def employee_spec():
    """Definitions for the salary and insurance formats"""
    return EMPLOYEE_SPEC


@pytest.fixture
def employee_env(employee_spec):
    """Definition environment of the employee formats"""
    env, _ = build_environment(load_spec(employee_spec))
    return env


@pytest.fixture
def swap_spec():
    """A hand-written lens that swaps a word and a number, with tests"""
    return SWAP_SPEC


@pytest.fixture
def spec_file(tmp_path):
    """Write spec text to a file and return its path"""
    def write(text, name="spec.lens"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
