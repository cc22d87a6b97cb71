from .sweepcli import entry

entry()
