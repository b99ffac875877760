import pytest

from cohit.hitbasis import admissible_basis_and_reducer


@pytest.fixture(scope="session")
def big_basis(tmp_path_factory):
    """Rank-4 degree-33 basis, built once and cached for the whole run."""
    cache = tmp_path_factory.mktemp("cohit-cache")
    return admissible_basis_and_reducer(4, 33, cache_dir=cache)
