def variation(role, instance, parents, seed, params):
    raise ValueError("deliberate failure")
