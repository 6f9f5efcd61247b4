from channel_quantumness.cli import main

if __name__ == "__main__":
    main()
