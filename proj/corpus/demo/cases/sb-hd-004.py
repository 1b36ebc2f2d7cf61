import requests

BASE = 'https://api.switch-bot.com/v1.1'


def build_headers(token):
    return {'Authorization': token}


def list_scenes(token):
    response = requests.get(f'{BASE}/scenes', headers=build_headers(token))
    return response.json()
