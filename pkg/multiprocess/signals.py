# sentinel closing the work and progress queues; no item is ever None
STOP = None
