from rovib.cli import main

main()
