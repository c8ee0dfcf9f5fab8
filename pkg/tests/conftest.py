from hypothesis import settings

settings.register_profile('mdtk', deadline=None, print_blob=True)
settings.load_profile('mdtk')
