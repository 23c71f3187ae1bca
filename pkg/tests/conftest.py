import pytest

from bedlam import fixture_path, parse_puzzle_file, parse_world_file


@pytest.fixture(scope="session")
def asylum_text():
    return fixture_path("asylum.puzzle").read_text()


@pytest.fixture(scope="session")
def asylum(asylum_text):
    return parse_puzzle_file(asylum_text)


@pytest.fixture(scope="session")
def solution_world(asylum):
    return parse_world_file(
        fixture_path("asylum.solution.world").read_text(), asylum)


@pytest.fixture(scope="session")
def ann_sl_world(asylum):
    return parse_world_file(
        fixture_path("asylum.ann_sl.world").read_text(), asylum)
