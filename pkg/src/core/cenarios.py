"""
Cenários e Varreduras - EdcaSim

Leitura e validação de arquivos de cenário (YAML) e os cenários embutidos.
Formato completo em docs/FORMATO_CENARIO.md.

Uso:
    from src.core.cenarios import carregar_cenario, parse_scenario

    config = carregar_cenario('edca-default', stations=5)
    config = parse_scenario(Path('meu_cenario.yaml').read_text())

Os embutidos são gerados como texto YAML e passam pelo mesmo parser
dos arquivos do usuário.
"""

import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from src.core.erros import ErroConfiguracao
from src.core.escalonador import Timestamp, US_POR_SEGUNDO, segundos_para_us
from src.core.parametros import (
    POLITICAS_BACKOFF,
    AcId,
    AcParams,
    DcfParams,
    EdcaParamSet,
    PhyParams,
    phase_offset_padrao,
    politica_backoff_padrao,
)
from src.core.paths import ProjectPaths
from src.core.trafego import MODOS, FlowSpec, TrafficClass

logger = logging.getLogger(__name__)

MODOS_MAC = ('dcf', 'edca')
PARAMETROS_SWEEP = ('txop_limit_us', 'txop_limit_32us', 'aifsn', 'cwmin', 'cwmax')
UNIDADE_TXOP_US = 32


# ============================================================================
# TIPOS
# ============================================================================

@dataclass(frozen=True)
class StationSpec:
    station_id: int
    flows: Tuple[FlowSpec, ...]
    dcf: DcfParams
    edca: EdcaParamSet
    rts_cts: bool = False
    join_at: Timestamp = 0


@dataclass(frozen=True)
class ChangeSpec:
    at: Timestamp
    stations: Tuple[StationSpec, ...]


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    mac_mode: str
    phy: PhyParams
    dcf: DcfParams
    edca_params: EdcaParamSet
    stations: Tuple[StationSpec, ...]
    rts_cts: bool
    duration_s: float
    changes: Tuple[ChangeSpec, ...] = ()
    seed: int = 1
    reps: int = 10
    backoff_policy: str = 'section'
    phase_offset: bool = True
    warmup_s: float = 0.0
    description: str = ''

    @property
    def duration_us(self) -> Timestamp:
        return segundos_para_us(self.duration_s)

    @property
    def warmup_us(self) -> Timestamp:
        return segundos_para_us(self.warmup_s)

    def todas_estacoes(self) -> List[StationSpec]:
        return list(self.stations) + [s for c in self.changes for s in c.stations]

    @property
    def n_stations(self) -> int:
        return len(self.todas_estacoes())

    def estacao(self, station_id: int) -> Optional[StationSpec]:
        for s in self.todas_estacoes():
            if s.station_id == station_id:
                return s
        return None


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioConfig
    parameter: str
    target: Tuple[int, AcId]
    values: Tuple[int, ...]

    def __post_init__(self):
        if self.parameter not in PARAMETROS_SWEEP:
            raise ErroConfiguracao(
                f"parâmetro de varredura desconhecido: {self.parameter} (válidos: {', '.join(PARAMETROS_SWEEP)})",
                campo='param',
            )
        if not self.values:
            raise ErroConfiguracao("lista de valores vazia", campo='values')
        if self.base.mac_mode != 'edca':
            raise ErroConfiguracao("varreduras exigem mac_mode: edca", campo='mac_mode')
        if self.base.estacao(self.target[0]) is None:
            raise ErroConfiguracao(f"estação {self.target[0]} não existe no cenário base", campo='target')


# ============================================================================
# LEITOR COM NÚMERO DE LINHA
# ============================================================================

Caminho = Tuple[Any, ...]


def _formatar(caminho: Caminho) -> str:
    texto = ""
    for parte in caminho:
        if isinstance(parte, int):
            texto += f"[{parte}]"
        else:
            texto += f".{parte}" if texto else str(parte)
    return texto or "<raiz>"


def _mapear_linhas(no, caminho: Caminho, linhas: Dict[Caminho, int]) -> None:
    linhas[caminho] = no.start_mark.line + 1
    if isinstance(no, yaml.MappingNode):
        for chave, valor in no.value:
            filho = caminho + (chave.value,)
            _mapear_linhas(valor, filho, linhas)
            # a linha de um campo é a da sua chave
            linhas[filho] = chave.start_mark.line + 1
    elif isinstance(no, yaml.SequenceNode):
        for i, item in enumerate(no.value):
            _mapear_linhas(item, caminho + (i,), linhas)


class _Leitor:
    """Valida o documento campo a campo, apontando caminho e linha nos erros."""

    def __init__(self, texto: str):
        try:
            raiz = yaml.compose(texto)
            self.dados = yaml.safe_load(texto)
        except yaml.YAMLError as e:
            marca = getattr(e, 'problem_mark', None)
            raise ErroConfiguracao(
                f"YAML inválido: {getattr(e, 'problem', e)}",
                linha=marca.line + 1 if marca is not None else None,
            ) from None
        self.linhas: Dict[Caminho, int] = {}
        if raiz is not None:
            _mapear_linhas(raiz, (), self.linhas)

    def linha(self, caminho: Caminho) -> Optional[int]:
        while caminho:
            if caminho in self.linhas:
                return self.linhas[caminho]
            caminho = caminho[:-1]
        return self.linhas.get(())

    def erro(self, caminho: Caminho, mensagem: str) -> ErroConfiguracao:
        return ErroConfiguracao(mensagem, campo=_formatar(caminho), linha=self.linha(caminho))

    def mapa(self, valor, caminho: Caminho, permitidas: Sequence[str]) -> Dict[str, Any]:
        if valor is None:
            return {}
        if not isinstance(valor, dict):
            raise self.erro(caminho, "esperado um mapeamento chave: valor")
        for chave in valor:
            if chave not in permitidas:
                raise self.erro(caminho + (chave,), f"chave desconhecida '{chave}'")
        return valor

    def lista(self, valor, caminho: Caminho) -> list:
        if valor is None:
            return []
        if not isinstance(valor, list):
            raise self.erro(caminho, "esperada uma lista")
        return valor

    def inteiro(self, valor, caminho: Caminho, minimo: Optional[int] = None) -> int:
        if isinstance(valor, bool) or not isinstance(valor, int):
            raise self.erro(caminho, f"esperado inteiro (atual: {valor!r})")
        if minimo is not None and valor < minimo:
            raise self.erro(caminho, f"deve ser >= {minimo} (atual: {valor})")
        return valor

    def numero(self, valor, caminho: Caminho, minimo: Optional[float] = None, estrito: bool = False) -> float:
        if isinstance(valor, bool) or not isinstance(valor, (int, float)):
            raise self.erro(caminho, f"esperado número (atual: {valor!r})")
        if minimo is not None and (valor <= minimo if estrito else valor < minimo):
            raise self.erro(caminho, f"deve ser {'>' if estrito else '>='} {minimo} (atual: {valor})")
        return float(valor)

    def booleano(self, valor, caminho: Caminho) -> bool:
        if not isinstance(valor, bool):
            raise self.erro(caminho, f"esperado true/false (atual: {valor!r})")
        return valor

    def texto(self, valor, caminho: Caminho) -> str:
        if not isinstance(valor, (str, int)) or isinstance(valor, bool):
            raise self.erro(caminho, f"esperado texto (atual: {valor!r})")
        return str(valor)


# ============================================================================
# PARSER
# ============================================================================

_CHAVES_RAIZ = (
    'name', 'description', 'mac_mode', 'duration_s', 'seed', 'reps', 'rts_cts',
    'backoff_policy', 'phase_offset', 'warmup_s', 'phy', 'dcf', 'edca_params',
    'stations', 'changes',
)
_CHAVES_DCF = tuple(f.name for f in fields(DcfParams))
_CHAVES_AC = ('cwmin', 'cwmax', 'aifsn', 'txop_limit_us', 'txop_limit_32us')
_CHAVES_ESTACAO = ('id', 'flows', 'rts_cts', 'edca') + _CHAVES_DCF
_CHAVES_FLUXO = ('id', 'class', 'mode', 'packet_size_bytes', 'rate_bps', 'start_s', 'stop_s')
_CHAVES_MUDANCA = ('at_s', 'stations')


def _ler_phy(leitor: _Leitor, dados, caminho: Caminho) -> PhyParams:
    permitidas = [f.name for f in fields(PhyParams)]
    mapa = leitor.mapa(dados, caminho, permitidas)
    valores = {k: leitor.inteiro(v, caminho + (k,), minimo=1) for k, v in mapa.items()}
    phy = replace(PhyParams(), **valores)
    violacoes = phy.validar()
    if violacoes:
        raise leitor.erro(caminho, "; ".join(violacoes))
    return phy


def _ler_dcf(leitor: _Leitor, dados: Dict[str, Any], caminho: Caminho, base: DcfParams) -> DcfParams:
    valores = {
        k: leitor.inteiro(dados[k], caminho + (k,))
        for k in _CHAVES_DCF if k in dados
    }
    dcf = replace(base, **valores)
    violacoes = dcf.validar()
    if violacoes:
        raise leitor.erro(caminho, "; ".join(violacoes))
    return dcf


def _ler_edca(leitor: _Leitor, dados, caminho: Caminho, base: EdcaParamSet) -> EdcaParamSet:
    mapa = leitor.mapa(dados, caminho, [a.name for a in AcId] + [a.name.lower() for a in AcId])
    edca = base
    for nome, valor in mapa.items():
        ac = AcId.de_nome(nome)
        sub = caminho + (nome,)
        campos = leitor.mapa(valor, sub, _CHAVES_AC)
        mudancas = {}
        for k, v in campos.items():
            if k == 'txop_limit_32us':
                mudancas['txop_limit_us'] = leitor.inteiro(v, sub + (k,), minimo=0) * UNIDADE_TXOP_US
            else:
                mudancas[k] = leitor.inteiro(v, sub + (k,))
        edca = edca.com(ac, **mudancas)
        violacoes = edca[ac].validar()
        if violacoes:
            raise leitor.erro(sub, "; ".join(violacoes))
    return edca


def _ler_fluxo(leitor: _Leitor, dados, caminho: Caminho, station_id: int, inicio_min: Timestamp) -> FlowSpec:
    mapa = leitor.mapa(dados, caminho, _CHAVES_FLUXO)
    if 'class' not in mapa:
        raise leitor.erro(caminho, "campo obrigatório 'class' ausente")
    try:
        classe = TrafficClass.de_rotulo(mapa['class'])
    except ValueError as e:
        raise leitor.erro(caminho + ('class',), str(e)) from None
    modo = leitor.texto(mapa.get('mode', 'cbr'), caminho + ('mode',))
    if modo not in MODOS:
        raise leitor.erro(caminho + ('mode',), f"modo desconhecido '{modo}' (válidos: {', '.join(MODOS)})")
    if 'packet_size_bytes' not in mapa:
        raise leitor.erro(caminho, "campo obrigatório 'packet_size_bytes' ausente")
    tamanho = leitor.inteiro(mapa['packet_size_bytes'], caminho + ('packet_size_bytes',), minimo=1)
    taxa = None
    if modo == 'cbr':
        if 'rate_bps' not in mapa:
            raise leitor.erro(caminho, "fluxo cbr exige 'rate_bps'")
        taxa = leitor.inteiro(mapa['rate_bps'], caminho + ('rate_bps',), minimo=1)
    elif 'rate_bps' in mapa:
        raise leitor.erro(caminho + ('rate_bps',), "rate_bps só se aplica a fluxos cbr")
    inicio = segundos_para_us(leitor.numero(mapa.get('start_s', 0), caminho + ('start_s',), minimo=0))
    inicio = max(inicio, inicio_min)
    fim = None
    if mapa.get('stop_s') is not None:
        fim = segundos_para_us(leitor.numero(mapa['stop_s'], caminho + ('stop_s',), minimo=0))
        if fim <= inicio:
            raise leitor.erro(caminho + ('stop_s',), "stop_s deve ser posterior ao início do fluxo")
    flow_id = leitor.texto(mapa.get('id', f"s{station_id}-{classe.value}"), caminho + ('id',))
    return FlowSpec(
        flow_id=flow_id,
        station=station_id,
        traffic_class=classe,
        mode=modo,
        packet_size_bytes=tamanho,
        rate_bps=taxa,
        start_at=inicio,
        stop_at=fim,
    )


def _ler_estacao(
    leitor: _Leitor,
    dados,
    caminho: Caminho,
    dcf_base: DcfParams,
    edca_base: EdcaParamSet,
    rts_base: bool,
    join_at: Timestamp,
) -> StationSpec:
    mapa = leitor.mapa(dados, caminho, _CHAVES_ESTACAO)
    if 'id' not in mapa:
        raise leitor.erro(caminho, "campo obrigatório 'id' ausente")
    station_id = leitor.inteiro(mapa['id'], caminho + ('id',), minimo=1)
    dcf = _ler_dcf(leitor, mapa, caminho, dcf_base)
    edca = _ler_edca(leitor, mapa.get('edca'), caminho + ('edca',), edca_base)
    rts = leitor.booleano(mapa['rts_cts'], caminho + ('rts_cts',)) if 'rts_cts' in mapa else rts_base
    fluxos = tuple(
        _ler_fluxo(leitor, f, caminho + ('flows', i), station_id, join_at)
        for i, f in enumerate(leitor.lista(mapa.get('flows'), caminho + ('flows',)))
    )
    return StationSpec(station_id=station_id, flows=fluxos, dcf=dcf, edca=edca, rts_cts=rts, join_at=join_at)


def parse_scenario(text: str) -> ScenarioConfig:
    """
    Lê e valida um cenário YAML.

    Raises:
        ErroConfiguracao: chave desconhecida, tipo errado, invariante violada
                          ou classe de tráfego desconhecida (com campo e linha)
    """
    leitor = _Leitor(text)
    raiz = leitor.mapa(leitor.dados, (), _CHAVES_RAIZ)

    nome = leitor.texto(raiz.get('name', 'cenario'), ('name',))
    mac = leitor.texto(raiz.get('mac_mode', 'edca'), ('mac_mode',)).lower()
    if mac not in MODOS_MAC:
        raise leitor.erro(('mac_mode',), f"mac_mode deve ser dcf ou edca (atual: {mac})")
    if 'duration_s' not in raiz:
        raise leitor.erro((), "campo obrigatório 'duration_s' ausente")
    duracao = leitor.numero(raiz['duration_s'], ('duration_s',), minimo=0, estrito=True)
    duracao_us = segundos_para_us(duracao)
    seed = leitor.inteiro(raiz.get('seed', 1), ('seed',), minimo=0)
    reps = leitor.inteiro(raiz.get('reps', 10), ('reps',), minimo=1)
    rts = leitor.booleano(raiz.get('rts_cts', False), ('rts_cts',))
    politica = leitor.texto(raiz.get('backoff_policy', politica_backoff_padrao()), ('backoff_policy',))
    if politica not in POLITICAS_BACKOFF:
        raise leitor.erro(('backoff_policy',), f"política desconhecida '{politica}' (válidas: {', '.join(POLITICAS_BACKOFF)})")
    fase = leitor.booleano(raiz.get('phase_offset', phase_offset_padrao()), ('phase_offset',))
    warmup = leitor.numero(raiz.get('warmup_s', 0), ('warmup_s',), minimo=0)
    if warmup >= duracao:
        raise leitor.erro(('warmup_s',), "warmup_s deve ser menor que duration_s")

    phy = _ler_phy(leitor, raiz.get('phy'), ('phy',))
    dcf = _ler_dcf(leitor, leitor.mapa(raiz.get('dcf'), ('dcf',), _CHAVES_DCF), ('dcf',), DcfParams())
    edca = _ler_edca(leitor, raiz.get('edca_params'), ('edca_params',), EdcaParamSet())

    estacoes = tuple(
        _ler_estacao(leitor, s, ('stations', i), dcf, edca, rts, 0)
        for i, s in enumerate(leitor.lista(raiz.get('stations'), ('stations',)))
    )

    mudancas: List[ChangeSpec] = []
    anterior = -1
    for i, m in enumerate(leitor.lista(raiz.get('changes'), ('changes',))):
        caminho = ('changes', i)
        mapa = leitor.mapa(m, caminho, _CHAVES_MUDANCA)
        if 'at_s' not in mapa:
            raise leitor.erro(caminho, "campo obrigatório 'at_s' ausente")
        at = segundos_para_us(leitor.numero(mapa['at_s'], caminho + ('at_s',), minimo=0))
        if at <= anterior:
            raise leitor.erro(caminho + ('at_s',), "instantes de mudança devem ser estritamente crescentes")
        if at >= duracao_us:
            raise leitor.erro(caminho + ('at_s',), "instante de mudança deve ser menor que duration_s")
        anterior = at
        novas = tuple(
            _ler_estacao(leitor, s, caminho + ('stations', j), dcf, edca, rts, at)
            for j, s in enumerate(leitor.lista(mapa.get('stations'), caminho + ('stations',)))
        )
        mudancas.append(ChangeSpec(at=at, stations=novas))

    config = ScenarioConfig(
        name=nome,
        mac_mode=mac,
        phy=phy,
        dcf=dcf,
        edca_params=edca,
        stations=estacoes,
        rts_cts=rts,
        duration_s=duracao,
        changes=tuple(mudancas),
        seed=seed,
        reps=reps,
        backoff_policy=politica,
        phase_offset=fase,
        warmup_s=warmup,
        description=leitor.texto(raiz.get('description', ''), ('description',)),
    )
    _validar_unicidade(leitor, config)
    return config


def _validar_unicidade(leitor: _Leitor, config: ScenarioConfig) -> None:
    vistas_estacoes: Dict[int, Caminho] = {}
    vistos_fluxos: Dict[str, Caminho] = {}
    grupos = [(('stations',), config.stations)] + [
        (('changes', i, 'stations'), m.stations) for i, m in enumerate(config.changes)
    ]
    for prefixo, estacoes in grupos:
        for i, estacao in enumerate(estacoes):
            caminho = prefixo + (i,)
            if estacao.station_id in vistas_estacoes:
                raise leitor.erro(caminho + ('id',), f"id de estação duplicado: {estacao.station_id}")
            vistas_estacoes[estacao.station_id] = caminho
            for j, fluxo in enumerate(estacao.flows):
                if fluxo.flow_id in vistos_fluxos:
                    raise leitor.erro(caminho + ('flows', j), f"flow_id duplicado: {fluxo.flow_id}")
                vistos_fluxos[fluxo.flow_id] = caminho


# ============================================================================
# TRANSFORMAÇÕES
# ============================================================================

def com_duracao(config: ScenarioConfig, duracao_s: float) -> ScenarioConfig:
    """
    Nova duração. Com mudanças de cenário a linha do tempo inteira
    (mudanças, início e fim dos fluxos) é escalada na mesma proporção.
    """
    if duracao_s <= 0:
        raise ErroConfiguracao(f"duration deve ser > 0 (atual: {duracao_s})", campo='duration_s')
    if not config.changes:
        return replace(config, duration_s=float(duracao_s), warmup_s=min(config.warmup_s, duracao_s / 2))
    return escalar_cenario(config, duracao_s / config.duration_s)


def escalar_cenario(config: ScenarioConfig, fator: float) -> ScenarioConfig:
    """Multiplica todos os instantes do cenário por fator."""

    def t(valor: Optional[Timestamp]) -> Optional[Timestamp]:
        return None if valor is None else int(round(valor * fator))

    def estacao(s: StationSpec) -> StationSpec:
        fluxos = tuple(replace(f, start_at=t(f.start_at), stop_at=t(f.stop_at)) for f in s.flows)
        return replace(s, flows=fluxos, join_at=t(s.join_at))

    return replace(
        config,
        duration_s=config.duration_s * fator,
        warmup_s=config.warmup_s * fator,
        stations=tuple(estacao(s) for s in config.stations),
        changes=tuple(
            ChangeSpec(at=t(m.at), stations=tuple(estacao(s) for s in m.stations))
            for m in config.changes
        ),
    )


def com_mac(config: ScenarioConfig, mac_mode: str) -> ScenarioConfig:
    if mac_mode not in MODOS_MAC:
        raise ErroConfiguracao(f"mac_mode deve ser dcf ou edca (atual: {mac_mode})", campo='mac_mode')
    return replace(config, mac_mode=mac_mode)


def aplicar_parametro(config: ScenarioConfig, parameter: str, target: Tuple[int, AcId], value: int) -> ScenarioConfig:
    """Cópia do cenário com um parâmetro EDCA de uma estação/AC alterado."""
    station_id, ac = target
    ac = AcId(ac)
    if parameter == 'txop_limit_32us':
        campo, valor = 'txop_limit_us', int(value) * UNIDADE_TXOP_US
    elif parameter in PARAMETROS_SWEEP:
        campo, valor = parameter, int(value)
    else:
        raise ErroConfiguracao(f"parâmetro de varredura desconhecido: {parameter}", campo='param')

    def alterar(s: StationSpec) -> StationSpec:
        if s.station_id != station_id:
            return s
        edca = s.edca.com(ac, **{campo: valor})
        violacoes = edca[ac].validar()
        if violacoes:
            raise ErroConfiguracao(f"{ac.name}: {'; '.join(violacoes)}", campo=parameter)
        return replace(s, edca=edca)

    if config.estacao(station_id) is None:
        raise ErroConfiguracao(f"estação {station_id} não existe no cenário", campo='target')
    return replace(
        config,
        stations=tuple(alterar(s) for s in config.stations),
        changes=tuple(replace(m, stations=tuple(alterar(s) for s in m.stations)) for m in config.changes),
    )


def parse_alvo(texto: str) -> Tuple[int, AcId]:
    """'1:VI' -> (1, AcId.VI)."""
    try:
        estacao, ac = str(texto).split(':')
        return int(estacao), AcId.de_nome(ac)
    except ValueError:
        raise ErroConfiguracao(f"alvo inválido '{texto}' (formato estação:AC, ex.: 1:VI)", campo='target') from None


# ============================================================================
# CENÁRIOS EMBUTIDOS
# ============================================================================

# (tamanho em bytes, taxa em b/s) por classe dos fluxos de teste
FLUXOS_TABELA = (
    ('voice', 160, 64_000),
    ('video', 1280, 640_000),
    ('best-effort', 1500, 960_000),
)


# Camadas físicas dos cenários de atraso (a 54 Mb/s os fluxos de teste de
# uma estação ocupam ~7% do canal).
# dcf-baseline: DSSS a 2 Mb/s, sobrecarregado para todo n >= 2.
PHY_DSSS_2MBPS = (
    ('slot_time_us', 20),
    ('sifs_us', 10),
    ('difs_us', 50),
    ('plcp_overhead_us', 192),
    ('data_rate_bps', 2_000_000),
    ('ctrl_rate_bps', 2_000_000),
)
# edca-default: OFDM a 6 Mb/s; voz + vídeo ocupam ~14% do canal por estação.
PHY_OFDM_6MBPS = (
    ('data_rate_bps', 6_000_000),
    ('ctrl_rate_bps', 6_000_000),
)

# estações BK saturadas contra o vídeo na varredura de AIFSN
BK_AIFS_SWEEP = 6


def _yaml_fluxo_cbr(classe: str, tamanho: int, taxa: int, indent: str) -> str:
    return (
        f"{indent}- class: {classe}\n"
        f"{indent}  mode: cbr\n"
        f"{indent}  packet_size_bytes: {tamanho}\n"
        f"{indent}  rate_bps: {taxa}\n"
    )


def _yaml_fluxo_saturado(classe: str, tamanho: int, indent: str) -> str:
    return (
        f"{indent}- class: {classe}\n"
        f"{indent}  mode: saturated\n"
        f"{indent}  packet_size_bytes: {tamanho}\n"
    )


def _yaml_phy(campos: Sequence[Tuple[str, int]]) -> str:
    return "phy:\n" + "".join(f"  {chave}: {valor}\n" for chave, valor in campos)


def _yaml_tres_fluxos(n: int, mac: str, nome: str, descricao: str, phy: Sequence[Tuple[str, int]] = ()) -> str:
    texto = (
        f"name: {nome}\n"
        f"description: \"{descricao}\"\n"
        f"mac_mode: {mac}\n"
        f"duration_s: 10\n"
        f"reps: 10\n"
    )
    if phy:
        texto += _yaml_phy(phy)
    texto += "stations:\n"
    for sid in range(1, n + 1):
        texto += f"  - id: {sid}\n    flows:\n"
        for classe, tamanho, taxa in FLUXOS_TABELA:
            texto += _yaml_fluxo_cbr(classe, tamanho, taxa, "      ")
    return texto


def _yaml_saturacao(mac: str, nome: str) -> str:
    texto = (
        f"name: {nome}\n"
        f"description: \"Voz e vídeo limitados em taxa; estações BK saturadas entram em 60 s e 90 s\"\n"
        f"mac_mode: {mac}\n"
        f"duration_s: 150\n"
        f"reps: 1\n"
        f"stations:\n"
        f"  - id: 1\n    flows:\n" + _yaml_fluxo_cbr('voice', 160, 64_000, "      ")
        + f"  - id: 2\n    flows:\n" + _yaml_fluxo_cbr('video', 1280, 640_000, "      ")
        + f"  - id: 3\n    flows:\n" + _yaml_fluxo_saturado('background', 1500, "      ")
        + "changes:\n"
        + "  - at_s: 60\n    stations:\n"
        + "      - id: 4\n        flows:\n" + _yaml_fluxo_saturado('background', 1500, "          ")
        + "  - at_s: 90\n    stations:\n"
    )
    for sid in (5, 6):
        texto += f"      - id: {sid}\n        flows:\n" + _yaml_fluxo_saturado('background', 1500, "          ")
    return texto


def _yaml_video_contra_bk(nome: str, n_bk: int = 1) -> str:
    """Estação 1 com vídeo saturado; estações 2.. com BK saturado."""
    descricao = "Dois hosts saturados: vídeo contra BK" if n_bk == 1 else f"Vídeo saturado contra {n_bk} hosts BK saturados"
    texto = (
        f"name: {nome}\n"
        f"description: \"{descricao}\"\n"
        f"mac_mode: edca\n"
        f"duration_s: 60\n"
        f"reps: 1\n"
        f"stations:\n"
        f"  - id: 1\n    flows:\n" + _yaml_fluxo_saturado('video', 1280, "      ")
    )
    for sid in range(2, n_bk + 2):
        texto += f"  - id: {sid}\n    flows:\n" + _yaml_fluxo_saturado('background', 1500, "      ")
    return texto


# nome -> (descrição, n padrão de estações ou None, gerador de texto)
CENARIOS_EMBUTIDOS = {
    'dcf-baseline': (
        "DCF a 2 Mb/s, n estações com voz/vídeo/melhor esforço (padrão n=6)", 6,
        lambda n: _yaml_tres_fluxos(n, 'dcf', 'dcf-baseline', 'DCF sem diferenciação de tráfego', PHY_DSSS_2MBPS),
    ),
    'edca-default': (
        "EDCA com parâmetros padrão a 6 Mb/s, n estações com voz/vídeo/melhor esforço (padrão n=4)", 4,
        lambda n: _yaml_tres_fluxos(n, 'edca', 'edca-default', 'EDCA com parâmetros padrão por AC', PHY_OFDM_6MBPS),
    ),
    'saturation': (
        "EDCA, voz e vídeo contra 1 -> 2 -> 4 estações BK saturadas em 150 s", None,
        lambda n: _yaml_saturacao('edca', 'saturation'),
    ),
    'saturation-dcf': (
        "Mesmo experimento de saturação com DCF", None,
        lambda n: _yaml_saturacao('dcf', 'saturation-dcf'),
    ),
    'txop-sweep': (
        "Varredura de TXOP do vídeo (10/100/150 x 32 µs), vídeo vs BK saturados, 60 s", None,
        lambda n: _yaml_video_contra_bk('txop-sweep'),
    ),
    'aifs-sweep': (
        "Varredura de AIFSN do vídeo (3/7/12/14), vídeo contra 6 hosts BK saturados, 60 s", None,
        lambda n: _yaml_video_contra_bk('aifs-sweep', BK_AIFS_SWEEP),
    ),
}

VARREDURAS_EMBUTIDAS = {
    'txop-sweep': ('txop_limit_32us', (1, AcId.VI), (10, 100, 150)),
    'aifs-sweep': ('aifsn', (1, AcId.VI), (3, 7, 12, 14)),
}


def listar_cenarios() -> List[Tuple[str, str]]:
    return [(nome, desc) for nome, (desc, _, _) in CENARIOS_EMBUTIDOS.items()]


def texto_cenario(nome: str, stations: Optional[int] = None) -> str:
    """Texto YAML de um cenário embutido."""
    if nome not in CENARIOS_EMBUTIDOS:
        raise ErroConfiguracao(
            f"cenário desconhecido '{nome}' (embutidos: {', '.join(CENARIOS_EMBUTIDOS)})", campo='scenario'
        )
    _, n_padrao, gerador = CENARIOS_EMBUTIDOS[nome]
    if stations is not None and n_padrao is None:
        logger.warning("cenário %s tem número fixo de estações; --stations ignorado", nome)
    n = stations if stations is not None else n_padrao
    if n is not None and n < 1:
        raise ErroConfiguracao(f"stations deve ser >= 1 (atual: {n})", campo='stations')
    return gerador(n)


def carregar_cenario(nome_ou_caminho: str, stations: Optional[int] = None) -> ScenarioConfig:
    """
    Cenário embutido pelo nome ou arquivo YAML pelo caminho.

    Raises:
        ErroConfiguracao: cenário inválido ou desconhecido
        OSError: arquivo ilegível
    """
    if nome_ou_caminho in CENARIOS_EMBUTIDOS:
        return parse_scenario(texto_cenario(nome_ou_caminho, stations))
    caminho = ProjectPaths.resolver_cenario(nome_ou_caminho)
    if caminho is None:
        raise ErroConfiguracao(
            f"cenário desconhecido '{nome_ou_caminho}' (embutidos: {', '.join(CENARIOS_EMBUTIDOS)})",
            campo='scenario',
        )
    return parse_scenario(Path(caminho).read_text(encoding='utf-8'))


def carregar_sweep(
    base: str,
    parameter: Optional[str] = None,
    target: Optional[str] = None,
    values: Optional[Sequence[int]] = None,
) -> SweepSpec:
    """
    Monta a varredura. Para 'txop-sweep' e 'aifs-sweep' os campos
    omitidos vêm da definição embutida.
    """
    padrao = VARREDURAS_EMBUTIDAS.get(base)
    config = carregar_cenario(base)
    if padrao is None and (parameter is None or target is None or not values):
        raise ErroConfiguracao("informe --param, --target e --values para este cenário base", campo='sweep')
    param = parameter or padrao[0]
    alvo = parse_alvo(target) if target is not None else padrao[1]
    valores = tuple(int(v) for v in values) if values else padrao[2]
    return SweepSpec(base=config, parameter=param, target=alvo, values=valores)


def eh_varredura(nome: str) -> bool:
    return nome in VARREDURAS_EMBUTIDAS


__all__ = [
    'MODOS_MAC',
    'PARAMETROS_SWEEP',
    'UNIDADE_TXOP_US',
    'StationSpec',
    'ChangeSpec',
    'ScenarioConfig',
    'SweepSpec',
    'parse_scenario',
    'com_duracao',
    'escalar_cenario',
    'com_mac',
    'aplicar_parametro',
    'parse_alvo',
    'FLUXOS_TABELA',
    'PHY_DSSS_2MBPS',
    'PHY_OFDM_6MBPS',
    'BK_AIFS_SWEEP',
    'CENARIOS_EMBUTIDOS',
    'VARREDURAS_EMBUTIDAS',
    'listar_cenarios',
    'texto_cenario',
    'carregar_cenario',
    'carregar_sweep',
    'eh_varredura',
]
