from hypothesis import settings

# exact arithmetic has occasional slow examples; judge by count, not time
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")
