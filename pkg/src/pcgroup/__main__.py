from pcgroup.cli import main

main()
