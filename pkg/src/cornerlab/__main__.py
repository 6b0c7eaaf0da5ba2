from .labcli import main

main()
