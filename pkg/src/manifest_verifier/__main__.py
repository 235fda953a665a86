from manifest_verifier.cli.main import main

if __name__ == "__main__":  # pragma: no cover
    main()
