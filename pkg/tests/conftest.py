from __future__ import annotations

import pytest

from bcauth.biosim import Gender, UserProfile


@pytest.fixture()
def male_profile() -> UserProfile:
    return UserProfile(
        user_id="alice",
        name="Alice Example",
        privileges=("read", "write"),
        declared_gender=Gender.MALE,
        declared_age=40,
    )
