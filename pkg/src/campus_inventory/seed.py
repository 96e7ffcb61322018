"""Built-in roles, the demo fixture and the default administrator.

The license fixture mirrors the five production rows the search suite is
pinned to; it is inserted verbatim (display type strings included), so it
goes through raw inserts rather than entity validation.
"""

from __future__ import annotations

from .access import hash_password
from .storage import Store

CRUD = ("create", "read", "update", "delete")
STOCK_KINDS = ("asset", "license", "location")

STUDENT_GRANTS = frozenset({
    ("read", "profile"),
    ("create", "request"),
})

CLERK_GRANTS = STUDENT_GRANTS | frozenset(
    {(action, kind) for action in CRUD for kind in STOCK_KINDS}
    | {("import", kind) for kind in STOCK_KINDS}
    | {("assign", kind) for kind in STOCK_KINDS}
    | {("approve", "request"), ("complete", "request"), ("view_all", "request"),
       ("read", "person"), ("read", "faculty")}
)

ADMIN_GRANTS = CLERK_GRANTS | frozenset({
    ("update", "person"), ("delete", "person"),
    ("create", "faculty"),
    ("assign", "role"), ("edit", "role"), ("read", "role"),
    ("report", "all"), ("audit", "all"),
})

ROLE_MATRIX = {
    "student": ("Own profile and requests", "Level1", STUDENT_GRANTS),
    "inventory_clerk": ("Day-to-day stock keeping", "Level1", CLERK_GRANTS),
    "admin": ("Full administration", "Level3", ADMIN_GRANTS),
}

# Name, seats, type, price, term, company, created — the demo license table.
LICENSE_FIXTURE = (
    ("Adobe 9.0", 6, "Teaching License", 200, None, "Nosso", "2010-04-04 17:54:02"),
    ("MS Office2003", 8, "Static License", 100, None, "Microsoft", "2010-04-04 17:43:45"),
    ("Photoshop", 1, "Static License", 0, "", "", "2010-04-11 23:24:03"),
    ("Visio-6", 11, "Research License", 20, "2Years", "Microsoft", "2010-04-04 17:51:39"),
    ("WindowsXP", 2, "Research License", 1000, "5 years", "Microsoft", "2010-04-11 22:53:32"),
)


def seed_roles(store: Store):
    """Install the three built-in roles; existing ones are left alone."""
    for role_id, (description, level, grants) in ROLE_MATRIX.items():
        if store.raw_select("SELECT 1 FROM roles WHERE Role_ID = ?", (role_id,)):
            continue
        store.raw_insert("roles", {"Role_ID": role_id, "Description": description})
        store.raw_insert("roles_set", {"Role_ID": role_id, "Level_Name": level})
        for action, kind in sorted(grants):
            store.raw_insert("role_grants",
                             {"Role_ID": role_id, "Action": action, "Kind": kind})


def seed_person(store: Store, username: str, password: str, role: str,
                **fields) -> int:
    """Create a person with credentials and bind them to a role."""
    payload = {"username": username,
               "password_digest": hash_password(password),
               "first_name": fields.pop("first_name", username)}
    payload.update(fields)
    person_id = store.create_record("person", payload, actor="seed")
    store.link("person_role", person_id, role)
    return person_id


def seed_admin(store: Store, username: str = "test", password: str = "test") -> int:
    return seed_person(store, username, password, "admin",
                       person_type="full_worker")


def seed_license_fixture(store: Store) -> list[int]:
    ids = []
    for name, seats, type_name, price, term, company, created in LICENSE_FIXTURE:
        ids.append(store.raw_insert("licenses", {
            "Name": name,
            "Licence_counter": seats,
            "Type": type_name,
            "Price": price,
            "Term": term,
            "Licence_company": company,
            "Creation_date": created,
        }))
    return ids


def seed_demo_location(store: Store) -> int:
    return store.create_record(
        "location",
        {"location_type": "storage", "description": "Central storage",
         "location_num": "S-1", "capacity": 100},
        actor="seed")


def seed_all(store: Store, admin_password: str = "test") -> dict:
    """Roles, the admin account, a storage location and the license demo."""
    seed_roles(store)
    admin_id = seed_admin(store, password=admin_password)
    location_id = seed_demo_location(store)
    license_ids = seed_license_fixture(store)
    return {"admin_id": admin_id, "location_id": location_id,
            "license_ids": license_ids}
