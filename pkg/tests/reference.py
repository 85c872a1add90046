"""
Brute-force reference for one synchronous round.

Written independently of the engine: instead of collecting freed cells it
asks, for every expansion target, whether any other particle still covers
the cell after the round.
"""

OFFSET = {0: (0, 1), 1: (1, 0), 2: (1, -1), 3: (0, -1), 4: (-1, 0), 5: (-1, 1)}

ALLOWED = {
    "N": ("s1", "s2"),
    "T": ("s1", "s2"),
    "E": ("s1",),
    "C": ("s2",),
    "D": ("s2",),
    "K": ("s1",),
}


def step_cell(cell, d):
    dx, dy = OFFSET[d % 6]
    return (cell[0] + dx, cell[1] + dy)


def body(shape, head, r):
    if shape == "s1":
        return {tuple(head)}
    return {tuple(head), step_cell(head, r + 3)}


def reference_round(particles, intents, next_id):
    """
    particles: list of (id, state, shape, head, r) with shape 's1'/'s2'
    intents: {id: (new_state, action_letter)}
    Returns (results, successors) where results maps id to one of
    'applied', 'failed-inadmissible', 'failed-occupied', 'failed-conflict'
    and successors is the new list of (id, state, shape, head, r).
    """
    results = {}
    remains = {}
    for pid, state, shape, head, r in particles:
        letter = intents[pid][1]
        if shape not in ALLOWED[letter]:
            results[pid] = "failed-inadmissible"
            remains[pid] = body(shape, head, r)
        elif letter == "K":
            remains[pid] = set()
        elif letter == "C":
            remains[pid] = {tuple(head)}
        else:
            remains[pid] = body(shape, head, r)

    wanted = {}
    for pid, state, shape, head, r in particles:
        if pid in results or intents[pid][1] != "E":
            continue
        target = step_cell(head, r)
        blocked = any(target in cells for other, cells in remains.items() if other != pid)
        if blocked:
            results[pid] = "failed-occupied"
        else:
            wanted.setdefault(target, []).append(pid)

    for target, contenders in wanted.items():
        best = min(contenders)
        for pid in contenders:
            results[pid] = "applied" if pid == best else "failed-conflict"

    for pid, *_ in particles:
        results.setdefault(pid, "applied")

    successors = []
    children = []
    for pid, state, shape, head, r in particles:
        if results[pid] != "applied":
            successors.append((pid, state, shape, tuple(head), r))
            continue

        new_state, letter = intents[pid]
        if letter == "N":
            successors.append((pid, new_state, shape, tuple(head), r))
        elif letter == "T" and shape == "s1":
            successors.append((pid, new_state, shape, tuple(head), (r + 1) % 6))
        elif letter == "T":
            successors.append((pid, new_state, shape, step_cell(head, r + 3), (r + 3) % 6))
        elif letter == "E":
            successors.append((pid, new_state, "s2", step_cell(head, r), r))
        elif letter == "C":
            successors.append((pid, new_state, "s1", tuple(head), r))
        elif letter == "D":
            successors.append((pid, new_state, "s1", tuple(head), r))
            children.append((next_id, new_state, "s1", step_cell(head, r + 3), r))
            next_id += 1

    return results, successors + children
