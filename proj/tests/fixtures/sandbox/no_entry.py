def something_else():
    return None
