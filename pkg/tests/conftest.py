import pytest

from helpers import planted_lifetime_records, synthetic_records, write_fixture_csvs


@pytest.fixture(scope="session")
def country_records():
    return synthetic_records()


@pytest.fixture(scope="session")
def planted_records():
    return planted_lifetime_records()


@pytest.fixture()
def fixture_paths(tmp_path, country_records):
    return write_fixture_csvs(country_records, tmp_path)
