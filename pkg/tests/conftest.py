from datetime import datetime, timedelta
from types import SimpleNamespace

import pytest

from campus_inventory.access import AccessControl
from campus_inventory.seed import seed_all, seed_person
from campus_inventory.storage import Store
from campus_inventory.workflow import RequestWorkflow


class FakeClock:
    def __init__(self, start=None):
        self.now = start or datetime(2010, 4, 12, 12, 0, 0)

    def __call__(self):
        return self.now

    def advance(self, **kwargs):
        self.now += timedelta(**kwargs)


@pytest.fixture
def store():
    s = Store(":memory:")
    yield s
    s.close()


@pytest.fixture
def world(store):
    """Seeded store with one session per built-in role."""
    seed_all(store)
    access = AccessControl(store)
    seed_person(store, "clerk", "clerk-pw", "inventory_clerk")
    seed_person(store, "student", "student-pw", "student")
    return SimpleNamespace(
        store=store,
        access=access,
        workflow=RequestWorkflow(store, access),
        admin=access.authenticate("test", "test"),
        clerk=access.authenticate("clerk", "clerk-pw"),
        student=access.authenticate("student", "student-pw"),
    )


def make_location(store, **over):
    fields = {"location_type": "storage", "description": "Central storage",
              "location_num": "S-1"}
    fields.update(over)
    return store.create_record("location", fields, actor="test")


def make_asset(store, location_id, **over):
    fields = {"asset_type": "Computer", "location_id": location_id}
    fields.update(over)
    return store.create_record("asset", fields, actor="test")


def make_person(store, username, **over):
    fields = {"username": username, "first_name": username}
    fields.update(over)
    return store.create_record("person", fields, actor="test")


def make_license(store, **over):
    fields = {"name": "Editor", "license_type": "Quantity", "licence_counter": 2}
    fields.update(over)
    return store.create_record("license", fields, actor="test")
