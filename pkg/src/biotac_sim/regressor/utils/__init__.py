from .boosting import ChannelEnsemble, PackedForest, Tree, best_split, fit_channel, grow_tree
from .losses import l1_l2_loss, l1_l2_loss_grad
from .networks import FeedForwardNet, Network, NetworkBNet, TransformerNet
from .optim import Adam, AdamState, adam_step
from .serialization import pack_arrays, unpack_arrays
from .training import train_network

__all__ = [
    "Adam",
    "AdamState",
    "ChannelEnsemble",
    "FeedForwardNet",
    "Network",
    "NetworkBNet",
    "PackedForest",
    "TransformerNet",
    "Tree",
    "adam_step",
    "best_split",
    "fit_channel",
    "grow_tree",
    "l1_l2_loss",
    "l1_l2_loss_grad",
    "pack_arrays",
    "train_network",
    "unpack_arrays",
]
