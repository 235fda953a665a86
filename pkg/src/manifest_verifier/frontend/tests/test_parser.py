from pathlib import Path
from unittest import TestCase

from ..exceptions import DuplicateAttribute, ManifestSyntaxError, UnsupportedFeature
from ..lexer import TokenKind, tokenize
from ..parser import parse_manifest, parse_manifest_file
from ..syntax import (
    Array,
    DefineDecl,
    DependencyDecl,
    Interpolation,
    Manifest,
    Num,
    Param,
    Ref,
    ResourceDecl,
    Str,
    Var,
)

MANIFESTS_DIR = Path(__file__).resolve().parents[2] / "fixtures" / "manifests"


class LexerTests(TestCase):
    def test_double_quoted_interpolation(self):
        (token, eof) = tokenize('"/home/${title}/.vimrc"')

        self.assertEqual(token.kind, TokenKind.string)
        self.assertEqual(
            token.value, Str(("/home/", Interpolation("title"), "/.vimrc"))
        )
        self.assertEqual(eof.kind, TokenKind.eof)

    def test_bare_interpolation(self):
        (token, _) = tokenize('"$title"')

        self.assertEqual(token.value, Str((Interpolation("title"),)))

    def test_single_quoted_strings_are_literal(self):
        (token, _) = tokenize(r"'it\'s $title'")

        self.assertEqual(token.value, Str(("it's $title",)))

    def test_escaped_dollar(self):
        (token, _) = tokenize(r'"cost: \$5"')

        self.assertEqual(token.value, Str(("cost: $5",)))

    def test_comments_are_skipped(self):
        tokens = tokenize("# comment\n/* block\n comment */ package")

        self.assertEqual(
            [token.kind for token in tokens], [TokenKind.name, TokenKind.eof]
        )
        self.assertEqual(tokens[0].position.line, 3)

    def test_arrows(self):
        kinds = [token.kind for token in tokenize("=> -> <-")]

        self.assertEqual(
            kinds,
            [
                TokenKind.fat_arrow,
                TokenKind.right_arrow,
                TokenKind.left_arrow,
                TokenKind.eof,
            ],
        )

    def test_unterminated_string(self):
        with self.assertRaises(ManifestSyntaxError) as context:
            tokenize("file {'/a")

        self.assertEqual(context.exception.position.line, 1)
        self.assertEqual(context.exception.position.column, 7)

    def test_collectors_are_unsupported(self):
        with self.assertRaises(UnsupportedFeature):
            tokenize("User <| title == 'carol' |>")


class ParseManifestTests(TestCase):
    def test_empty_input(self):
        self.assertEqual(parse_manifest(""), Manifest())

    def test_single_package(self):
        manifest = parse_manifest("package{'vim': ensure => present}")

        self.assertEqual(len(manifest.items), 1)
        decl = manifest.items[0]
        assert isinstance(decl, ResourceDecl)
        self.assertEqual(decl.rtype, "package")
        self.assertEqual(decl.title, Str.literal("vim"))
        self.assertEqual(decl.attributes[0].name, "ensure")
        self.assertEqual(decl.attributes[0].value, Str.literal("present"))

    def test_semicolon_separates_attributes(self):
        manifest = parse_manifest(
            "user{'carol': ensure => present; managehome => true }"
        )

        (decl,) = manifest.resources
        self.assertEqual(
            [attribute.name for attribute in decl.attributes],
            ["ensure", "managehome"],
        )

    def test_semicolon_separates_bodies(self):
        manifest = parse_manifest(
            "file { '/a': ensure => directory; '/b': content => 'x'; }"
        )

        self.assertEqual(
            [decl.title for decl in manifest.resources],
            [Str.literal("/a"), Str.literal("/b")],
        )

    def test_values(self):
        manifest = parse_manifest(
            "file { $path: mode => 644, tags => ['a', $b,], require => File['/x'] }"
        )

        (decl,) = manifest.resources
        self.assertEqual(decl.title, Var("path"))
        values = {attribute.name: attribute.value for attribute in decl.attributes}
        self.assertEqual(values["mode"], Num(644))
        self.assertEqual(values["tags"], Array((Str.literal("a"), Var("b"))))
        self.assertEqual(values["require"], Ref("file", Str.literal("/x")))

    def test_reference_with_several_titles(self):
        manifest = parse_manifest("File['/a', '/b'] -> Package['vim']")

        self.assertEqual(
            manifest.dependencies,
            [
                DependencyDecl(
                    Ref("file", Str.literal("/a")),
                    Ref("package", Str.literal("vim")),
                    position=None,
                ),
                DependencyDecl(
                    Ref("file", Str.literal("/b")),
                    Ref("package", Str.literal("vim")),
                    position=None,
                ),
            ],
        )

    def test_chain(self):
        manifest = parse_manifest("User['a'] -> File['/b'] <- Package['c']")

        pairs = [(dep.source.rtype, dep.target.rtype) for dep in manifest.dependencies]
        self.assertEqual(pairs, [("user", "file"), ("package", "file")])

    def test_chain_with_declarations(self):
        manifest = parse_manifest(
            "package {'vim': ensure => present } -> file {'/etc/vimrc': }"
        )

        self.assertEqual(len(manifest.resources), 2)
        (dependency,) = manifest.dependencies
        self.assertEqual(dependency.source, Ref("package", Str.literal("vim")))
        self.assertEqual(dependency.target, Ref("file", Str.literal("/etc/vimrc")))

    def test_define_with_defaults(self):
        manifest = parse_manifest(
            "define site($docroot = '/var/www', $port) { file {$docroot: } }"
        )

        (define,) = manifest.defines
        self.assertEqual(define.name, "site")
        self.assertEqual(
            define.params,
            (Param("docroot", Str.literal("/var/www")), Param("port", None)),
        )
        self.assertEqual(len(define.body.resources), 1)

    def test_composed_defines(self):
        manifest = parse_manifest_file(MANIFESTS_DIR / "cpp_ocaml.pp")

        defines = manifest.defines
        self.assertEqual([define.name for define in defines], ["cpp", "ocaml"])
        for define in defines:
            with self.subTest(define=define.name):
                self.assertIsInstance(define, DefineDecl)
                self.assertEqual(len(define.body.resources), 3)
                self.assertEqual(len(define.body.dependencies), 2)

    def test_duplicate_attribute(self):
        with self.assertRaises(DuplicateAttribute) as context:
            parse_manifest("file {'/a':\n  content => 'x',\n  content => 'y' }")

        self.assertEqual(context.exception.position.line, 3)
        self.assertEqual(context.exception.position.column, 3)

    def test_syntax_error_position(self):
        with self.assertRaises(ManifestSyntaxError) as context:
            parse_manifest("package {'vim'\n  ensure => present }")

        self.assertEqual(context.exception.position.line, 2)
        self.assertIn("Expected ':'", context.exception.message)

    def test_unsupported_keywords(self):
        for source in (
            "class apache { }",
            "node 'web' { }",
            "include apache",
            "$x = 1",
            "if $x { }",
        ):
            with (
                self.subTest(source=source),
                self.assertRaises(UnsupportedFeature),
            ):
                parse_manifest(source)

    def test_reference_alone_is_not_a_statement(self):
        with self.assertRaises(ManifestSyntaxError):
            parse_manifest("File['/a']")

    def test_all_fixtures_parse(self):
        for path in sorted(MANIFESTS_DIR.glob("*.pp")):
            with self.subTest(manifest=path.name):
                parse_manifest_file(path)
