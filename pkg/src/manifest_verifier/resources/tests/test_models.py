from unittest import TestCase

from manifest_verifier.frontend.constants import ResourceType
from manifest_verifier.fsir.evaluation import evaluate, run_sequence
from manifest_verifier.fsir.filesystem import DIR, ERR, File, FileSystem, Ok
from manifest_verifier.fsir.oracle import enumerate_filesystems, oracle_witness
from manifest_verifier.fsir.paths import Path, parent_closure
from manifest_verifier.fsir.syntax import (
    ERROR,
    SKIP,
    Cp,
    CreateFile,
    DoesNotExist,
    FsExpr,
    If,
    IsFile,
    Rm,
    contents_of,
    idemdir,
    iter_exprs,
    mentioned_paths,
    seq,
)

from ..base import CompileEnv, install_file, literal_content
from ..compiler import compile_resource
from ..exceptions import InvalidAttributes, UnknownPackage
from ..package import sentinel
from .factories import (
    FileFactory,
    PackageDbFactory,
    PackageEntryFactory,
    PackageFactory,
    PrimitiveResourceFactory,
    UserFactory,
)

EMPTY = FileSystem.from_strings({"/": DIR})


def p(text: str) -> Path:
    return Path.parse(text)


def domain(*exprs: FsExpr) -> frozenset[Path]:
    return parent_closure(path for expr in exprs for path in mentioned_paths(expr))


def assert_idempotent(test: TestCase, expr: FsExpr, extra_contents=("other",)):
    contents = contents_of(expr) | set(extra_contents)
    witness = oracle_witness(seq(expr, expr), expr, domain(expr), contents)
    test.assertIsNone(witness, f"not idempotent on {witness!r}")


class FileModelTests(TestCase):
    env = CompileEnv(db=PackageDbFactory.create())

    def compile(self, title="/a", **attributes):
        resource = FileFactory.create(title=title, attributes=attributes)
        return compile_resource(resource, self.env)

    def test_content(self):
        expr = self.compile(content="x")

        a = p("/a")
        self.assertEqual(
            expr,
            If(
                IsFile(a),
                seq(Rm(a), CreateFile(a, "x")),
                If(DoesNotExist(a), CreateFile(a, "x"), ERROR),
            ),
        )

    def test_content_ensures_the_file_or_fails(self):
        expr = self.compile(content="x")

        for fs in enumerate_filesystems(domain(expr), {"x", "y"}):
            with self.subTest(fs=fs):
                match evaluate(expr, fs):
                    case Ok(result):
                        self.assertEqual(result[p("/a")], File("x"))
                    case result:
                        self.assertEqual(result, ERR)

    def test_missing_parent_directory(self):
        expr = self.compile(title="/a/b", content="x")

        self.assertEqual(evaluate(expr, EMPTY), ERR)

    def test_directory(self):
        self.assertEqual(self.compile(ensure="directory"), idemdir(p("/a")))

    def test_absent(self):
        expr = self.compile(ensure="absent")

        with self.subTest("absent path"):
            self.assertEqual(evaluate(expr, EMPTY), Ok(EMPTY))

        with self.subTest("file"):
            fs = EMPTY.set(p("/a"), File("x"))
            self.assertEqual(evaluate(expr, fs), Ok(EMPTY))

        with self.subTest("directory without force is kept"):
            fs = EMPTY.set(p("/a"), DIR)
            self.assertEqual(evaluate(expr, fs), Ok(fs))

        with self.subTest("empty directory with force"):
            fs = EMPTY.set(p("/a"), DIR)
            forced = self.compile(ensure="absent", force="true")
            self.assertEqual(evaluate(forced, fs), Ok(EMPTY))

    def test_source(self):
        expr = self.compile(title="/dst", source="file:///src")

        fs = EMPTY.set(p("/src"), File("c"))
        self.assertEqual(evaluate(expr, fs), Ok(fs.set(p("/dst"), File("c"))))
        self.assertIn(Cp(p("/src"), p("/dst")), list(iter_exprs(expr)))

    def test_replace_false_keeps_existing_file(self):
        expr = self.compile(content="x", replace="false")

        fs = EMPTY.set(p("/a"), File("y"))
        self.assertEqual(evaluate(expr, fs), Ok(fs))
        self.assertEqual(evaluate(expr, EMPTY), Ok(fs.set(p("/a"), File("x"))))

    def test_ensure_file_without_content(self):
        expr = self.compile(ensure="file")

        self.assertEqual(evaluate(expr, EMPTY), Ok(EMPTY.set(p("/a"), File(""))))
        existing = EMPTY.set(p("/a"), File("y"))
        self.assertEqual(evaluate(expr, existing), Ok(existing))
        self.assertEqual(evaluate(expr, EMPTY.set(p("/a"), DIR)), ERR)

    def test_present_accepts_directories(self):
        expr = self.compile(ensure="present")

        fs = EMPTY.set(p("/a"), DIR)
        self.assertEqual(evaluate(expr, fs), Ok(fs))

    def test_path_attribute(self):
        expr = self.compile(title="motd", path="/etc/motd", content="hi")

        self.assertEqual(mentioned_paths(expr), {p("/etc/motd")})

    def test_permissions_are_ignored(self):
        expr = self.compile(content="x", owner="root", group="root", mode="0644")

        self.assertEqual(expr, self.compile(content="x"))

    def test_literal_content_cannot_look_like_a_generated_id(self):
        expr = self.compile(content="pkg:vim:/usr/bin/vim")

        self.assertEqual(contents_of(expr), {"lit:pkg:vim:/usr/bin/vim"})
        self.assertEqual(literal_content("syntax on"), "syntax on")
        self.assertEqual(literal_content("lit:x"), "lit:lit:x")

    def test_invalid_attributes(self):
        cases = [
            ({"ensure": "directory", "content": "x"}, "content"),
            ({"ensure": "absent", "source": "/b"}, "source"),
            ({"content": "x", "source": "/b"}, "source"),
            ({"ensure": "link"}, "ensure"),
            ({"recurse": "true"}, "recurse"),
            ({"force": "maybe"}, "force"),
            ({"source": "puppet:///modules/a"}, "source"),
            ({"path": "relative"}, "path"),
        ]
        for attributes, attribute in cases:
            with (
                self.subTest(attributes=attributes),
                self.assertRaises(InvalidAttributes) as context,
            ):
                self.compile(**attributes)

            self.assertEqual(context.exception.attribute, attribute)

    def test_file_models_are_idempotent(self):
        for attributes in (
            {"content": "x"},
            {"ensure": "directory"},
            {"ensure": "absent"},
            {"ensure": "absent", "force": "true"},
            {"ensure": "file"},
            {"ensure": "present"},
            {"source": "/src"},
            {"content": "x", "replace": "false"},
        ):
            with self.subTest(attributes=attributes):
                assert_idempotent(self, self.compile(title="/d/a", **attributes))

    def test_copy_then_remove_source_is_not_idempotent(self):
        copy = self.compile(title="/dst", source="/src")
        remove = self.compile(title="/src", ensure="absent")
        expr = seq(copy, remove)

        witness = oracle_witness(
            seq(expr, expr), expr, domain(expr), contents_of(expr) | {"c"}
        )

        self.assertIsNotNone(witness)


class PackageModelTests(TestCase):
    def setUp(self):
        super().setUp()
        self.db = PackageDbFactory.create(
            packages={
                "vim": PackageEntryFactory.create(files=["/usr/bin/vim"]),
                "tool": PackageEntryFactory.create(files=["/t/f"]),
                "perl": PackageEntryFactory.create(
                    files=["/usr/bin/perl", "/usr/share/perl/Carp.pm"]
                ),
                "golang-go": PackageEntryFactory.create(
                    files=["/usr/bin/go", "/usr/share/go/doc"], deps=["perl"]
                ),
                "meta": PackageEntryFactory.create(),
            }
        )
        self.env = CompileEnv(db=self.db)

    def compile(self, name, ensure="present"):
        resource = PackageFactory.create(title=name, attributes={"ensure": ensure})
        return compile_resource(resource, self.env)

    def install(self, *names) -> FileSystem:
        result = run_sequence([self.compile(name) for name in names], EMPTY)
        assert isinstance(result, Ok)
        return result.fs

    def test_present(self):
        marker = sentinel("vim")

        self.assertEqual(
            self.compile("vim"),
            If(
                DoesNotExist(marker),
                seq(
                    idemdir(p("/usr")),
                    idemdir(p("/usr/bin")),
                    idemdir(p("/var")),
                    idemdir(p("/var/db")),
                    idemdir(p("/var/db/pkgs")),
                    install_file(p("/usr/bin/vim"), "pkg:vim:/usr/bin/vim"),
                    install_file(marker, "pkg:vim:/var/db/pkgs/vim"),
                ),
                SKIP,
            ),
        )

    def test_install_on_empty_system(self):
        fs = self.install("vim")

        self.assertEqual(fs[p("/usr/bin/vim")], File("pkg:vim:/usr/bin/vim"))
        self.assertIn(sentinel("vim"), fs)

    def test_aliases(self):
        self.assertEqual(self.compile("vim", "latest"), self.compile("vim"))
        self.assertEqual(self.compile("vim", "installed"), self.compile("vim"))
        self.assertEqual(self.compile("vim", "purged"), self.compile("vim", "absent"))

    def test_present_and_absent_are_idempotent(self):
        for ensure in ("present", "absent"):
            with self.subTest(ensure=ensure):
                assert_idempotent(self, self.compile("tool", ensure))

    def test_absent_when_not_installed(self):
        fs = EMPTY.set(p("/t"), DIR).set(p("/t/f"), File("mine"))

        self.assertEqual(evaluate(self.compile("tool", "absent"), fs), Ok(fs))

    def test_absent_removes_files_and_unique_directories(self):
        fs = self.install("vim", "tool")

        result = evaluate(self.compile("tool", "absent"), fs)

        assert isinstance(result, Ok)
        self.assertNotIn(p("/t/f"), result.fs)
        self.assertNotIn(p("/t"), result.fs)
        self.assertNotIn(sentinel("tool"), result.fs)
        # shared directories stay
        self.assertIn(p("/var/db/pkgs"), result.fs)
        self.assertIn(p("/usr/bin/vim"), result.fs)

    def test_present_installs_dependencies(self):
        fs = self.install("golang-go")

        for path in ("/usr/bin/go", "/usr/bin/perl"):
            with self.subTest(path=path):
                self.assertIn(p(path), fs)
        self.assertIn(sentinel("perl"), fs)
        self.assertIn(sentinel("golang-go"), fs)

    def test_removing_a_dependency_breaks_dependents(self):
        fs = self.install("golang-go")

        result = evaluate(self.compile("perl", "absent"), fs)

        assert isinstance(result, Ok)
        self.assertNotIn(p("/usr/bin/go"), result.fs)
        self.assertNotIn(p("/usr/bin/perl"), result.fs)
        # the stale installation record of the dependent stays
        self.assertIn(sentinel("golang-go"), result.fs)

    def test_unordered_dependency_and_removal_diverge(self):
        go = self.compile("golang-go")
        perl = self.compile("perl", "absent")

        first = run_sequence([go, perl], EMPTY)
        second = run_sequence([perl, go], EMPTY)

        assert isinstance(first, Ok) and isinstance(second, Ok)
        self.assertNotEqual(first.fs, second.fs)

    def test_overlapping_packages_overwrite_files(self):
        db = PackageDbFactory.create(
            packages={
                "a": PackageEntryFactory.create(files=["/x"]),
                "b": PackageEntryFactory.create(files=["/x"]),
            }
        )
        env = CompileEnv(db=db)
        a = compile_resource(PackageFactory.create(title="a"), env)
        b = compile_resource(PackageFactory.create(title="b"), env)

        first = run_sequence([a, b], EMPTY)
        second = run_sequence([b, a], EMPTY)

        assert isinstance(first, Ok) and isinstance(second, Ok)
        self.assertEqual(first.fs[p("/x")], File("pkg:b:/x"))
        self.assertEqual(second.fs[p("/x")], File("pkg:a:/x"))

    def test_empty_package_only_writes_its_sentinel(self):
        fs = self.install("meta")

        self.assertEqual(
            {str(path) for path in fs},
            {"/", "/var", "/var/db", "/var/db/pkgs", "/var/db/pkgs/meta"},
        )

    def test_unknown_package(self):
        with self.assertRaises(UnknownPackage):
            self.compile("emacs")

    def test_invalid_ensure(self):
        with self.assertRaises(InvalidAttributes):
            self.compile("vim", "7.4.052")


class AccountModelTests(TestCase):
    env = CompileEnv(db=PackageDbFactory.create())

    def compile(self, rtype, title, **attributes):
        resource = PrimitiveResourceFactory.create(
            rtype=rtype, title=title, attributes=attributes
        )
        return compile_resource(resource, self.env)

    def test_user_with_home(self):
        expr = self.compile(ResourceType.user, "carol", managehome="true")

        result = evaluate(expr, EMPTY)

        assert isinstance(result, Ok)
        self.assertEqual(result.fs[p("/etc/users/carol")], File("rsrc:user:carol"))
        self.assertEqual(result.fs[p("/home/carol")], DIR)

    def test_user_before_home_file(self):
        user = compile_resource(
            UserFactory.create(
                title="carol", attributes={"ensure": "present", "managehome": "true"}
            ),
            self.env,
        )
        vimrc = compile_resource(
            FileFactory.create(
                title="/home/carol/.vimrc", attributes={"content": "syntax on"}
            ),
            self.env,
        )

        self.assertIsInstance(run_sequence([user, vimrc], EMPTY), Ok)
        self.assertEqual(run_sequence([vimrc, user], EMPTY), ERR)

    def test_custom_home(self):
        expr = self.compile(
            ResourceType.user, "svc", managehome="yes", home="/srv/svc"
        )

        result = evaluate(expr, EMPTY)

        assert isinstance(result, Ok)
        self.assertEqual(result.fs[p("/srv/svc")], DIR)

    def test_user_absent(self):
        expr = self.compile(ResourceType.user, "carol", ensure="absent")

        fs = (
            EMPTY.set(p("/etc"), DIR)
            .set(p("/etc/users"), DIR)
            .set(p("/etc/users/carol"), File("rsrc:user:carol"))
        )
        result = evaluate(expr, fs)
        self.assertEqual(result, Ok(fs.remove(p("/etc/users/carol"))))

    def test_group_absent_on_empty_system(self):
        expr = self.compile(ResourceType.group, "staff", ensure="absent")

        self.assertEqual(evaluate(expr, EMPTY), Ok(EMPTY))

    def test_group(self):
        result = evaluate(self.compile(ResourceType.group, "staff"), EMPTY)

        assert isinstance(result, Ok)
        self.assertEqual(result.fs[p("/etc/groups/staff")], File("rsrc:group:staff"))

    def test_ssh_key_needs_home_directory(self):
        expr = self.compile(
            ResourceType.ssh_authorized_key, "carol@laptop", user="carol", key="AAAA"
        )

        self.assertEqual(evaluate(expr, EMPTY), ERR)

    def test_ssh_key_run_twice(self):
        expr = self.compile(
            ResourceType.ssh_authorized_key, "carol@laptop", user="carol", key="AAAA"
        )
        home = EMPTY.set(p("/home"), DIR).set(p("/home/carol"), DIR)

        once = evaluate(expr, home)

        assert isinstance(once, Ok)
        self.assertEqual(evaluate(seq(expr, expr), home), once)
        self.assertEqual(
            once.fs[p("/home/carol/.ssh/authorized_keys")],
            File("rsrc:ssh_authorized_key:carol"),
        )
        self.assertIn(p("/etc/sshkeys/carol/carol@laptop"), once.fs)

    def test_ssh_key_conflicts_with_key_file(self):
        key = self.compile(
            ResourceType.ssh_authorized_key, "carol@laptop", user="carol", key="AAAA"
        )
        keys_file = compile_resource(
            FileFactory.create(
                title="/home/carol/.ssh/authorized_keys",
                attributes={"content": "ssh-rsa BBBB"},
            ),
            self.env,
        )
        home = (
            EMPTY.set(p("/home"), DIR)
            .set(p("/home/carol"), DIR)
            .set(p("/home/carol/.ssh"), DIR)
        )

        first = run_sequence([key, keys_file], home)
        second = run_sequence([keys_file, key], home)

        assert isinstance(first, Ok) and isinstance(second, Ok)
        self.assertNotEqual(first.fs, second.fs)

    def test_ssh_key_absent_on_empty_system(self):
        expr = self.compile(
            ResourceType.ssh_authorized_key,
            "carol@laptop",
            user="carol",
            ensure="absent",
        )

        self.assertEqual(evaluate(expr, EMPTY), Ok(EMPTY))

    def test_account_models_are_idempotent(self):
        for rtype, title, attributes in (
            (ResourceType.user, "carol", {"managehome": "true"}),
            (ResourceType.user, "carol", {"ensure": "absent"}),
            (ResourceType.group, "staff", {}),
            (ResourceType.group, "staff", {"ensure": "absent"}),
        ):
            with self.subTest(rtype=rtype, attributes=attributes):
                assert_idempotent(self, self.compile(rtype, title, **attributes))

    def test_invalid_attributes(self):
        cases = [
            (ResourceType.user, "a/b", {}),
            (ResourceType.user, "carol", {"managehome": "sometimes"}),
            (ResourceType.user, "carol", {"ensure": "locked"}),
            (ResourceType.group, "staff", {"managehome": "true"}),
            (ResourceType.ssh_authorized_key, "k", {"key": "AAAA"}),
            (ResourceType.ssh_authorized_key, "k", {"user": "carol"}),
        ]
        for rtype, title, attributes in cases:
            with (
                self.subTest(rtype=rtype, attributes=attributes),
                self.assertRaises(InvalidAttributes),
            ):
                self.compile(rtype, title, **attributes)

    def test_ignored_attributes(self):
        self.assertEqual(
            self.compile(ResourceType.user, "carol", uid=1001, shell="/bin/zsh"),
            self.compile(ResourceType.user, "carol"),
        )
