import pytest

import gen


@pytest.fixture
def sig():
    return gen.make_sig()
