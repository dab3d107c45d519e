from .dtorder import main

main()
