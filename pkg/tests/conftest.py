import random
import socket
import time
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"

SUITE_START = time.monotonic()

_ACCEPTANCE_RESULTS: dict[str, str] = {}


@pytest.fixture(scope="session", autouse=True)
def no_network_guard():
    """The whole suite must run without network egress."""
    real_connect = socket.socket.connect

    def guarded(self, address):
        if self.family in (socket.AF_INET, socket.AF_INET6):
            raise AssertionError(f"network egress attempted: {address}")
        return real_connect(self, address)

    socket.socket.connect = guarded
    try:
        yield
    finally:
        socket.socket.connect = real_connect


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE_RESULTS[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_RESULTS:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in sorted(_ACCEPTANCE_RESULTS.items()):
            flag = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"[{flag}] {name}")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture()
def workdir(tmp_path: Path) -> Path:
    return tmp_path


def spectre_corpus(n: int, seed: int = 11) -> list[str]:
    """Deterministic spectre-dialect decks for fixpoint and fuzz tests."""
    rng = random.Random(seed)
    decks = []
    for _ in range(n):
        lines = ["* generated deck"]
        nets = ["0", "a", "b", "c", "out", "in"]
        for i in range(rng.randint(2, 6)):
            kind = rng.choice("RCLVM")
            n1, n2 = rng.sample(nets, 2)
            if kind in "RCL":
                value = f"{rng.randint(1, 99)}{rng.choice(['', 'k', 'p', 'n', 'u'])}"
                lines.append(f"{kind}{i} {n1} {n2} {value}")
            elif kind == "V":
                lines.append(f"V{i} {n1} {n2} dc {rng.randint(0, 5)}")
            else:
                model = rng.choice(["nmos", "pmos"])
                n3, n4 = rng.sample(nets, 2)
                lines.append(f"M{i} {n1} {n2} {n3} {n4} {model} W={rng.randint(1,20)}u L=1u")
        if rng.random() < 0.5:
            lines.append(".ac dec 10 1 1G")
        if rng.random() < 0.3:
            lines.append(f".param gain_target={rng.randint(20, 60)}")
        decks.append("\n".join(lines) + "\n")
    return decks


def ads_corpus(n: int, seed: int = 23) -> list[str]:
    rng = random.Random(seed)
    decks = []
    for _ in range(n):
        w = rng.uniform(1.0, 40.0)
        l = rng.uniform(5.0, 40.0)
        lines = [
            "// generated antenna deck",
            "MSUB:MS1 Er=4.4 H=1.6 mm",
            f'MLIN:Patch1 p 0 Subst="MS1" W={w:.2f} mm L={l:.2f} mm',
            f'MLIN:Feed1 in p Subst="MS1" W=3 mm L=15 mm',
            "Term:T1 in 0 Num=1 Z=50 Ohm",
            f"S_Param:SP1 Start={rng.randint(1, 2)}.0 GHz Stop={rng.randint(3, 5)}.0 GHz",
        ]
        decks.append("\n".join(lines) + "\n")
    return decks


def netlist_corpus_files() -> list[Path]:
    return sorted((FIXTURES / "netlists").glob("*"))
