"""
Models of ``user``, ``group`` and ``ssh_authorized_key`` resources.

Each principal is an entry file in its own subtree (``/etc/users``, ``/etc/groups``
and ``/etc/sshkeys/<user>``) whose content is unique to the resource. An ssh key
also rewrites the user's ``authorized_keys`` file.
"""

from __future__ import annotations

from manifest_verifier.frontend.constants import ResourceType
from manifest_verifier.frontend.graph import PrimitiveResource
from manifest_verifier.fsir.paths import Path
from manifest_verifier.fsir.syntax import (
    SKIP,
    CreateFile,
    DoesNotExist,
    FsExpr,
    If,
    IsFile,
    Rm,
    idemdir,
    seq,
)

from .base import AttributeReader, install_file, resource_content

__all__ = ["compile_group", "compile_ssh_key", "compile_user"]

ETC = Path.parse("/etc")
USERS_DIR = ETC.child("users")
GROUPS_DIR = ETC.child("groups")
SSH_KEYS_DIR = ETC.child("sshkeys")
HOME = Path.parse("/home")

ENSURE_VALUES = frozenset({"present", "absent"})

USER_IGNORED_ATTRIBUTES = frozenset(
    {
        "comment",
        "expiry",
        "gid",
        "groups",
        "membership",
        "password",
        "password_max_age",
        "password_min_age",
        "purge_ssh_keys",
        "shell",
        "system",
        "uid",
    }
)
GROUP_IGNORED_ATTRIBUTES = frozenset({"gid", "members", "system"})
SSH_KEY_IGNORED_ATTRIBUTES = frozenset({"options", "type"})


def _remove_entry(entry: Path) -> FsExpr:
    return If(DoesNotExist(entry), SKIP, Rm(entry))


def compile_user(resource: PrimitiveResource) -> FsExpr:
    reader = AttributeReader(
        resource, {"name", "ensure", "managehome", "home"}, USER_IGNORED_ATTRIBUTES
    )
    name = reader.segment("name", resource.title)
    ensure = reader.choice("ensure", ENSURE_VALUES, "present")
    managehome = reader.boolean("managehome")
    home = reader.path("home", str(HOME.child(name)))
    if home.is_root:
        raise reader.invalid("home", "the root directory cannot be a home directory")

    entry = USERS_DIR.child(name)
    if ensure == "absent":
        # home directories are left in place; their contents are not modelled
        return _remove_entry(entry)

    steps = [
        idemdir(ETC),
        idemdir(USERS_DIR),
        install_file(entry, resource_content(ResourceType.user, name)),
    ]
    if managehome:
        if not home.parent.is_root:
            steps.append(idemdir(home.parent))
        steps.append(idemdir(home))
    return seq(*steps)


def compile_group(resource: PrimitiveResource) -> FsExpr:
    reader = AttributeReader(resource, {"name", "ensure"}, GROUP_IGNORED_ATTRIBUTES)
    name = reader.segment("name", resource.title)
    ensure = reader.choice("ensure", ENSURE_VALUES, "present")

    entry = GROUPS_DIR.child(name)
    if ensure == "absent":
        return _remove_entry(entry)
    return seq(
        idemdir(ETC),
        idemdir(GROUPS_DIR),
        install_file(entry, resource_content(ResourceType.group, name)),
    )


def compile_ssh_key(resource: PrimitiveResource) -> FsExpr:
    """
    Compile an ``ssh_authorized_key`` resource.

    The key file gets a content-id per user, so two keys of one user agree on it
    while any other writer of the file conflicts with them.
    """
    reader = AttributeReader(
        resource,
        {"name", "ensure", "user", "key", "target"},
        SSH_KEY_IGNORED_ATTRIBUTES,
    )
    name = reader.segment("name", resource.title)
    ensure = reader.choice("ensure", ENSURE_VALUES, "present")
    user = reader.segment("user")
    if ensure == "present" and not reader.string("key"):
        raise reader.invalid("key", "a key is required")
    target = reader.path(
        "target", str(HOME.child(user).child(".ssh").child("authorized_keys"))
    )
    if target.is_root or target.parent.is_root:
        raise reader.invalid("target", f"'{target}' cannot hold a key file")

    user_dir = SSH_KEYS_DIR.child(user)
    entry = user_dir.child(name)
    key_file_content = resource_content(ResourceType.ssh_authorized_key, user)
    if ensure == "absent":
        return seq(
            _remove_entry(entry),
            If(
                IsFile(target),
                seq(Rm(target), CreateFile(target, key_file_content)),
                SKIP,
            ),
        )
    return seq(
        idemdir(ETC),
        idemdir(SSH_KEYS_DIR),
        idemdir(user_dir),
        install_file(
            entry, resource_content(ResourceType.ssh_authorized_key, f"{user}/{name}")
        ),
        idemdir(target.parent),
        install_file(target, key_file_content),
    )
