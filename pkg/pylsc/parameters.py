"""
Parameters...
"""


class Parameters:
    """
    Default hyper-parameters for both tasks, the communication protocol, the
    networks and the learner. The 'desk' preset is sized to train on a single
    CPU; the 'full' preset switches to the full-scale arenas and optimiser
    settings.

    Parameters
    ----------
    preset : str
        either 'desk' or 'full'
    """
    def __init__(self, preset='desk'):
        assert preset in ['desk', 'full']
        self.preset = preset
        self.set_battle_params()
        self.set_spread_params()
        self.set_cluster_params()
        self.set_network_params()
        self.set_learner_params()
        self.set_run_params()
        if preset == 'full':
            self.set_full_params()

    def set_battle_params(self):
        """
        Grid battle task
        """
        # side length of the square arena (cells)
        self.battle_arena = 12
        # team sizes
        self.battle_n_allies = 8
        self.battle_n_enemies = 8
        # side length of the square perception window (cells)
        self.battle_view = 6
        # episode horizon (steps)
        self.battle_horizon = 300

        ## unit stats: speed (max move distance), attack power, health
        self.ally_speed = 1
        self.ally_attack = 1
        self.ally_hp = 4
        self.enemy_speed = 2
        self.enemy_attack = 2
        self.enemy_hp = 10

        ## rewards
        # successful hit on an opponent
        self.reward_hit = 5.
        # own death
        self.reward_death = -2.
        # attack into an empty cell
        self.reward_attack_blank = -0.01

        # max vertical jitter of the spawn formations (cells)
        self.formation_jitter = 1

    def set_spread_params(self):
        """
        Cooperative spread task
        """
        # side length of the square arena
        self.spread_arena = 1.
        self.spread_n_agents = 12
        self.spread_n_landmarks = 4
        # landmarks are visible only closer than this
        self.spread_view_radius = 0.4
        # agents closer than this occupy a landmark
        self.spread_capture_radius = 0.2
        # distance covered by one move
        self.spread_step = 0.1
        # episode horizon (steps)
        self.spread_horizon = 50
        # number of agents a landmark asks for
        self.agents_per_landmark = 3

        ## rewards
        # landmark held by exactly the requested number of agents
        self.reward_occupy = 2.
        # landmark held by more agents than requested
        self.reward_overload = -10.

    def set_cluster_params(self):
        """
        Cluster-based routing protocol
        """
        # cluster radius d, battle (cells) / spread (arena units)
        self.battle_radius = 6.
        self.spread_radius = 0.6
        # rounds an undecided agent listens before claiming leadership (T_e)
        self.max_wait_rounds = 2
        # bound on consecutive election rounds without progress
        self.rounds_cap = 16

    def set_network_params(self):
        """
        Encoder, message-passing and Q-network sizes
        """
        # size of the local embedding, cluster and global perception vectors
        self.hidden_dim = 32
        # dimension of one message
        self.msg_dim = 3
        # affine+ReLU layers in every message-passing edge/node function
        self.phi_layers = 1
        ## battle observation encoder
        # number of convolution layers over the perception window
        self.conv_layers = 2
        # channels per convolution layer
        self.conv_channels = 16
        # hidden sizes of the Q-network, battle / spread
        self.battle_q_hidden = (128, 64)
        self.spread_q_hidden = (64, 64)
        # number of discrete communication weights {0,1,2}
        self.n_weight_levels = 3
        # feed the reverse up message into the down edge function
        self.down_edge_uses_up_message = False

    def set_learner_params(self):
        """
        Q-learning parameters
        """
        # discount
        self.gamma = 0.98
        # soft target update rate
        self.tau = 0.01
        # mini-batch size, battle / spread
        self.battle_batch_size = 32
        self.spread_batch_size = 32
        # Adam learning rate, battle / spread
        self.battle_lr = 1e-3
        self.spread_lr = 1e-3
        self.adam_beta1 = 0.9
        self.adam_beta2 = 0.999
        self.adam_eps = 1e-8
        # gradient updates per episode (K)
        self.update_rounds = 4
        # replay capacity (transitions)
        self.replay_capacity = 50000
        ## epsilon-greedy schedule
        self.eps_start = 1.0
        self.eps_end = 0.01
        # fraction of the training episodes over which epsilon decays
        self.eps_decay_fraction = 0.6
        # bootstrap the weight generator from 'target' or 'online' weights
        self.weight_target = 'target'

    def set_run_params(self):
        """
        Outer training loop
        """
        self.battle_episodes = 500
        self.spread_episodes = 3000
        # evaluate and checkpoint every this many episodes
        self.eval_every = 100
        # evaluation rollouts per checkpoint
        self.eval_trials = 50
        # weight used by every agent in the fixed-weight variant
        self.fixed_weight_level = 2

    def set_full_params(self):
        """
        Full-scale arenas, team sizes, batch sizes and learning rates
        """
        self.battle_arena = 40
        self.battle_n_allies = 64
        self.battle_n_enemies = 64
        self.battle_batch_size = 1
        self.spread_batch_size = 64
        self.battle_lr = 1e-4
        self.spread_lr = 1e-2
        self.battle_episodes = 1750
        self.spread_episodes = 3000
